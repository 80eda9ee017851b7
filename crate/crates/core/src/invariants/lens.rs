//! Correction terms of lens spaces.

use std::sync::Mutex;

use num_integer::Integer;
use num_rational::Ratio;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct LensSpace {
    pub p: i64,
    pub q: i64,
}

impl LensSpace {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 1 && q >= 0 {
            return Ok(LensSpace { p, q });
        }
        if !(p > q && q > 0) {
            return Err(Error::InvalidLens { p, q, msg: "need p > q > 0".into() });
        }
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidLens { p, q, msg: "p and q must be coprime".into() });
        }
        Ok(LensSpace { p, q })
    }

    /// The d-invariant of the spin^c structure `i` (reduced mod p).
    pub fn d(&self, i: i64) -> Rational {
        d_rec(self.p, self.q, i.rem_euclid(self.p))
    }
}

fn d_rec(p: i64, q: i64, i: i64) -> Rational {
    if p == 1 {
        return Rational::from_integer(0);
    }
    let t = 2 * i + 1 - p - q;
    Rational::new(-1, 4) + Rational::new(t * t, 4 * p * q) - d_rec(q, p % q, i % q)
}

/// `d(L(p, q), i)`; indices `0 <= i < p + q` are reduced mod p.
pub fn d_lens(p: i64, q: i64, i: i64) -> Result<Rational> {
    let l = LensSpace::new(p, q)?;
    if i < 0 || i >= p + q {
        return Err(Error::InvalidLens { p, q, msg: format!("spin^c index {i} out of range") });
    }
    Ok(l.d(i))
}

/// Thread-safe memo of [`d_lens`] values.
#[derive(Debug, Default)]
pub struct DCache {
    map: Mutex<FxHashMap<(i64, i64, i64), Rational>>,
}

impl DCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, p: i64, q: i64, i: i64) -> Result<Rational> {
        let key = (p, q, i);
        if let Some(v) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(*v);
        }
        let v = d_lens(p, q, i)?;
        self.map.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Indices of the self-conjugate spin^c structures of `L(p, q)`.
pub fn self_conjugate_spins(p: i64, q: i64) -> Result<Vec<i64>> {
    LensSpace::new(p, q)?;
    let mut out = Vec::new();
    for twice in [p + q - 1, q - 1] {
        if twice % 2 == 0 {
            let i = (twice / 2).rem_euclid(p);
            if !out.contains(&i) {
                out.push(i);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn is_square_free(m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidParameter("square-freeness of 0".into()));
    }
    let mut m = m;
    let mut f = 2u64;
    while f * f <= m {
        if m.is_multiple_of(f) {
            m /= f;
            if m.is_multiple_of(f) {
                return Ok(false);
            }
        }
        f += 1;
    }
    Ok(true)
}

/// Whether `L(m, 1)` can be obtained from `-L(m, 1)` by a distance one
/// surgery, as decided by its d-invariant in the unique spin structure.
pub fn chirally_cosmetic_lens(m: i64) -> Result<bool> {
    if m <= 0 || m % 2 == 0 || !is_square_free(m as u64)? {
        return Err(Error::InvalidParameter(format!("{m} is not an odd square-free positive integer")));
    }
    let d = if m == 1 { Rational::from_integer(0) } else { d_lens(m, 1, 0)? };
    Ok(d == Rational::from_integer(0) || d == Rational::from_integer(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn small_values() {
        assert_eq!(d_lens(1, 1, 0).unwrap(), r(0, 1));
        assert_eq!(d_lens(5, 1, 0).unwrap(), r(1, 1));
        assert_eq!(d_lens(3, 1, 0).unwrap(), r(1, 2));
        assert_eq!(d_lens(3, 1, 1).unwrap(), r(-1, 6));
        assert_eq!(d_lens(3, 1, 2).unwrap(), r(-1, 6));
    }

    #[test]
    fn closed_form_for_m_1() {
        for m in (3..=99).step_by(2) {
            assert_eq!(d_lens(m, 1, 0).unwrap(), r(m - 1, 4));
        }
    }

    #[test]
    fn d_values_sum_like_casson_walker_bound() {
        // 4pq d is integral
        for (p, q) in [(7, 3), (11, 4), (13, 5), (25, 7)] {
            for i in 0..p {
                let d = d_lens(p, q, i).unwrap();
                assert_eq!((d * Rational::from_integer(4 * p * q)).denom(), &1);
            }
        }
    }

    #[test]
    fn index_reduction() {
        assert_eq!(d_lens(5, 2, 5).unwrap(), d_lens(5, 2, 0).unwrap());
        assert!(d_lens(5, 2, 7).is_err());
        assert!(d_lens(6, 4, 0).is_err());
        assert!(d_lens(3, 5, 0).is_err());
    }

    #[test]
    fn spins() {
        assert_eq!(self_conjugate_spins(5, 1).unwrap(), vec![0]);
        assert_eq!(self_conjugate_spins(4, 1).unwrap(), vec![0, 2]);
        for p in (3..=99).step_by(2) {
            assert_eq!(self_conjugate_spins(p, 1).unwrap(), vec![0]);
        }
        for (p, q) in [(7, 2), (9, 4), (15, 8)] {
            assert_eq!(self_conjugate_spins(p, q).unwrap().len(), 1);
        }
    }

    #[test]
    fn square_free() {
        assert!(is_square_free(7).unwrap());
        assert!(!is_square_free(49).unwrap());
        assert!(!is_square_free(45).unwrap());
        assert!(is_square_free(1).unwrap());
        assert!(is_square_free(30).unwrap());
        assert!(is_square_free(0).is_err());
    }

    #[test]
    fn cosmetic_lens() {
        assert!(chirally_cosmetic_lens(1).unwrap());
        assert!(chirally_cosmetic_lens(5).unwrap());
        assert!(!chirally_cosmetic_lens(7).unwrap());
        assert!(chirally_cosmetic_lens(9).is_err());
        assert!(chirally_cosmetic_lens(4).is_err());
    }

    #[test]
    fn cache_agrees() {
        let c = DCache::new();
        assert_eq!(c.get(5, 1, 0).unwrap(), r(1, 1));
        assert_eq!(c.get(5, 1, 0).unwrap(), r(1, 1));
        assert_eq!(c.len(), 1);
    }
}
