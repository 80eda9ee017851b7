//! Two-variable Laurent polynomials in `a` and `z` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;

/// Sparse map from `(power of a, power of z)` to a nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i32, i32), i64>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn monomial(coef: i64, a_exp: i32, z_exp: i32) -> Self {
        let mut p = Self::zero();
        if coef != 0 {
            p.terms.insert((a_exp, z_exp), coef);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i32, i32), i64)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k.0, k.1, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), i64)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, *c))
    }

    pub fn coefficient(&self, a_exp: i32, z_exp: i32) -> i64 {
        self.terms.get(&(a_exp, z_exp)).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a_exp: i32, z_exp: i32, coef: i64) {
        if coef == 0 {
            return;
        }
        let e = self.terms.entry((a_exp, z_exp)).or_insert(0);
        *e += coef;
        if *e == 0 {
            self.terms.remove(&(a_exp, z_exp));
        }
    }

    /// `self * coef * a^a_exp * z^z_exp`.
    pub fn mul_monomial(&self, coef: i64, a_exp: i32, z_exp: i32) -> Self {
        if coef == 0 {
            return Self::zero();
        }
        LaurentPoly2 { terms: self.terms.iter().map(|(&(i, j), &c)| ((i + a_exp, j + z_exp), c * coef)).collect() }
    }

    /// Accumulates `other * coef * a^a_exp * z^z_exp` into `self`.
    pub fn add_scaled(&mut self, other: &Self, coef: i64, a_exp: i32, z_exp: i32) {
        for (&(i, j), &c) in &other.terms {
            self.add_term(i + a_exp, j + z_exp, c * coef);
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Image under the mirror map `a -> -a^-1`, `z -> z`.
    pub fn mirror(&self) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), &c)| ((-i, j), if i.rem_euclid(2) == 1 { -c } else { c }))
                .collect(),
        }
    }

    /// Image under `a -> a^-1`, `z -> z`.
    pub fn invert_a(&self) -> Self {
        LaurentPoly2 { terms: self.terms.iter().map(|(&(i, j), &c)| ((-i, j), c)).collect() }
    }

    /// Evaluates at real `a`, `z` (both nonzero when negative exponents occur).
    pub fn eval(&self, a: f64, z: f64) -> f64 {
        self.terms.iter().map(|(&(i, j), &c)| c as f64 * a.powi(i) * z.powi(j)).sum()
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, o: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Add for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(mut self, o: LaurentPoly2) -> LaurentPoly2 {
        self += &o;
        self
    }
}

impl AddAssign<&LaurentPoly2> for LaurentPoly2 {
    fn add_assign(&mut self, o: &LaurentPoly2) {
        for (&(i, j), &c) in &o.terms {
            self.add_term(i, j, c);
        }
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, o: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        out.add_scaled(o, -1, 0, 0);
        out
    }
}

impl Sub for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, o: LaurentPoly2) -> LaurentPoly2 {
        &self - &o
    }
}

impl Neg for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        self.mul_monomial(-1, 0, 0)
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, o: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (&(i, j), &c) in &self.terms {
            out.add_scaled(o, c, i, j);
        }
        out
    }
}

impl Mul for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, o: LaurentPoly2) -> LaurentPoly2 {
        &self * &o
    }
}

fn write_var(f: &mut fmt::Formatter<'_>, var: char, e: i32) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => write!(f, "{var}"),
        _ => write!(f, "{var}^{e}"),
    }
}

/// Terms ordered by power of `z`, then power of `a`, e.g. `2a^-2 - a^-4 + a^-2z^2`.
impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<(i32, i32)> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| (j, i));
        for (n, (i, j)) in keys.into_iter().enumerate() {
            let c = self.terms[&(i, j)];
            let mag = c.unsigned_abs();
            if n == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            if mag != 1 || (i == 0 && j == 0) {
                write!(f, "{mag}")?;
            }
            write_var(f, 'a', i)?;
            write_var(f, 'z', j)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly2({self})")
    }
}

impl FromStr for LaurentPoly2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let err = |msg: &str| Error::Parse { line: 0, msg: format!("polynomial `{s}`: {msg}") };
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err("empty"));
        }
        let mut pos = 0;
        let mut out = LaurentPoly2::zero();

        fn int(chars: &[char], pos: &mut usize) -> Option<i64> {
            let start = *pos;
            if *pos < chars.len() && (chars[*pos] == '-' || chars[*pos] == '+') {
                *pos += 1;
            }
            let digits = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == digits {
                *pos = start;
                return None;
            }
            chars[start..*pos].iter().collect::<String>().parse().ok()
        }

        let mut first = true;
        while pos < chars.len() {
            let mut sign = 1i64;
            if chars[pos] == '+' || chars[pos] == '-' {
                if chars[pos] == '-' {
                    sign = -1;
                }
                pos += 1;
            } else if !first {
                return Err(err("expected + or -"));
            }
            first = false;
            let mut coef = None;
            if pos < chars.len() && chars[pos].is_ascii_digit() {
                coef = int(&chars, &mut pos);
            }
            let mut exps = [0i32; 2];
            let mut saw_var = false;
            for (slot, var) in ['a', 'z'].into_iter().enumerate() {
                if pos < chars.len() && chars[pos] == var {
                    pos += 1;
                    saw_var = true;
                    exps[slot] = 1;
                    if pos < chars.len() && chars[pos] == '^' {
                        pos += 1;
                        exps[slot] = int(&chars, &mut pos).ok_or_else(|| err("bad exponent"))? as i32;
                    }
                }
            }
            if coef.is_none() && !saw_var {
                return Err(err("empty term"));
            }
            out.add_term(exps[0], exps[1], sign * coef.unwrap_or(1));
        }
        Ok(out)
    }
}
