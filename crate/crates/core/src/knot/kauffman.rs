//! Kauffman polynomial `F(a, z)` of oriented links.
//!
//! `F(L) = a^-w(D) Λ(D)` where the regular isotopy invariant `Λ` satisfies
//! `Λ(D+) + Λ(D-) = z (Λ(D0) + Λ(D∞))`, `Λ(O) = 1` and gains a factor `a`
//! per positive kink. Evaluation switches the bad crossings of a descending
//! plan one by one, as for HOMFLY, with two smoothings per switch. The
//! smoothing that breaks orientation is re-oriented before recursing.

use rustc_hash::FxHashMap;

use super::diagram::{Crossing, KnotDiagram};
use super::homfly::descending_plan;
use super::poly::LaurentPoly2;
use crate::error::{Error, Result};

const MEMO_LIMIT: usize = 1 << 18;

#[derive(Clone, Debug)]
pub struct KauffmanEngine {
    max_crossings: usize,
    memo: FxHashMap<Vec<u32>, LaurentPoly2>,
    delta_powers: Vec<LaurentPoly2>,
}

impl KauffmanEngine {
    pub fn new(max_crossings: usize) -> Self {
        KauffmanEngine { max_crossings, memo: FxHashMap::default(), delta_powers: vec![LaurentPoly2::one()] }
    }

    pub fn kauffman(&mut self, d: &KnotDiagram) -> Result<LaurentPoly2> {
        let d = d.simplify();
        if d.crossing_count() > self.max_crossings {
            return Err(Error::CrossingBudget { crossings: d.crossing_count(), bound: self.max_crossings });
        }
        if d.crossings.is_empty() && d.free_loops == 0 {
            return Err(Error::InvalidDiagram("empty diagram".into()));
        }
        if self.memo.len() > MEMO_LIMIT {
            self.memo.clear();
        }
        Ok(self.eval(d))
    }

    /// `((a + a^-1) / z - 1)^k`, the value on a `k + 1` component unlink.
    fn delta_pow(&mut self, k: usize) -> LaurentPoly2 {
        while self.delta_powers.len() <= k {
            let delta = LaurentPoly2::from_terms([((1, -1), 1), ((-1, -1), 1), ((0, 0), -1)]);
            let next = self.delta_powers.last().unwrap() * &delta;
            self.delta_powers.push(next);
        }
        self.delta_powers[k].clone()
    }

    fn eval(&mut self, d: KnotDiagram) -> LaurentPoly2 {
        let d = d.simplify();
        if d.crossings.is_empty() {
            return self.delta_pow(d.free_loops as usize - 1);
        }
        let key = d.canonical_key();
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }

        let (bad, components) = descending_plan(&d, true);
        let mut acc = LaurentPoly2::zero();
        // F(d) = sum of smoothed terms + (-1)^m a^shift F(cur)
        let mut shift = 0i32;
        let mut coef = 1i64;
        let mut cur = d.clone();
        for b in bad {
            let s = cur.crossings[b].sign as i32;
            let w = cur.writhe();
            let p0 = self.eval(cur.smooth(b));
            acc.add_scaled(&p0, coef, shift - s, 1);
            let inf = reoriented(&cur.excise(&[b], &cross_joins(&cur.crossings[b])));
            let w_inf = inf.writhe();
            let pinf = self.eval(inf);
            acc.add_scaled(&pinf, coef, shift + w_inf - w, 1);
            cur.switch(b);
            coef = -coef;
            shift -= 2 * s;
        }
        let unlink = self.delta_pow(components + d.free_loops as usize - 1);
        acc.add_scaled(&unlink, coef, shift, 0);

        self.memo.insert(key, acc.clone());
        acc
    }
}

/// Label pairs joined by the smoothing that does not respect orientation:
/// the two incoming edges meet, as do the two outgoing ones.
fn cross_joins(c: &Crossing) -> [(u32, u32); 2] {
    let [i, j, k, l] = c.labels;
    if c.sign > 0 {
        [(i, l), (j, k)]
    } else {
        [(i, j), (l, k)]
    }
}

/// Orients every component of a diagram whose crossings are valid only as
/// unoriented counterclockwise 4-tuples with the under-strand in slots 0 and 2.
fn reoriented(d: &KnotDiagram) -> KnotDiagram {
    let n = d.crossings.len();
    let mut ports: FxHashMap<u32, [(u32, u8); 2]> = FxHashMap::default();
    let mut seen: FxHashMap<u32, u8> = FxHashMap::default();
    for (ci, c) in d.crossings.iter().enumerate() {
        for slot in 0..4 {
            let l = c.labels[slot];
            let k = seen.entry(l).or_insert(0);
            ports.entry(l).or_insert([(u32::MAX, 0); 2])[*k as usize] = (ci as u32, slot as u8);
            *k += 1;
        }
    }
    // per crossing: label at each slot and the slots where the passes enter
    let mut labels = vec![[0u32; 4]; n];
    let mut under_in = vec![u8::MAX; n];
    let mut over_in = vec![u8::MAX; n];
    let mut next_label = 1u32;
    for start in 0..n {
        for first_slot in [0u8, 1u8] {
            let entered = if first_slot == 0 { under_in[start] } else { over_in[start] };
            if entered != u8::MAX {
                continue;
            }
            let (mut c, mut s) = (start, first_slot);
            loop {
                if s % 2 == 0 {
                    under_in[c] = s;
                } else {
                    over_in[c] = s;
                }
                let out = (s + 2) % 4;
                let l = d.crossings[c].labels[out as usize];
                let [p, q] = ports[&l];
                let (nc, ns) = if p == (c as u32, out) { q } else { p };
                labels[c][out as usize] = next_label;
                labels[nc as usize][ns as usize] = next_label;
                next_label += 1;
                c = nc as usize;
                s = ns;
                let done = if s % 2 == 0 { under_in[c] != u8::MAX } else { over_in[c] != u8::MAX };
                if done {
                    break;
                }
            }
        }
    }
    let crossings = (0..n)
        .map(|c| {
            let rot = under_in[c] as usize;
            let l = labels[c];
            let t = [l[rot], l[(rot + 1) % 4], l[(rot + 2) % 4], l[(rot + 3) % 4]];
            let sign = if (over_in[c] as usize + 4 - rot) % 4 == 3 { 1 } else { -1 };
            Crossing::new(t, sign)
        })
        .collect();
    KnotDiagram { crossings, free_loops: d.free_loops }
}

pub fn kauffman(d: &KnotDiagram) -> Result<LaurentPoly2> {
    KauffmanEngine::new(super::homfly::DEFAULT_MAX_CROSSINGS).kauffman(d)
}
