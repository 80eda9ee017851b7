//! HOMFLY polynomial by reduction to descending diagrams.
//!
//! Normalisation: `P(unknot) = 1` and `a P(L+) - a^-1 P(L-) = z P(L0)`.
//! Components are traversed from base points; every crossing first met on
//! its under-strand is switched in turn, each switch contributing a smoothed
//! term. The fully switched diagram is descending, hence an unlink.

use rustc_hash::FxHashMap;

use super::diagram::KnotDiagram;
use super::poly::LaurentPoly2;
use crate::error::{Error, Result};

/// Crossing budget used when none is given.
pub const DEFAULT_MAX_CROSSINGS: usize = 40;

const MEMO_LIMIT: usize = 1 << 18;

#[derive(Clone, Debug)]
pub struct HomflyEngine {
    max_crossings: usize,
    simplify: bool,
    memo: Option<FxHashMap<Vec<u32>, LaurentPoly2>>,
    mu_powers: Vec<LaurentPoly2>,
}

impl Default for HomflyEngine {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_CROSSINGS)
    }
}

impl HomflyEngine {
    pub fn new(max_crossings: usize) -> Self {
        HomflyEngine {
            max_crossings,
            simplify: true,
            memo: Some(FxHashMap::default()),
            mu_powers: vec![LaurentPoly2::one()],
        }
    }

    /// Plain skein-tree expansion: no memo, no Reidemeister simplification.
    pub fn unoptimized(max_crossings: usize) -> Self {
        HomflyEngine { max_crossings, simplify: false, memo: None, mu_powers: vec![LaurentPoly2::one()] }
    }

    pub fn max_crossings(&self) -> usize {
        self.max_crossings
    }

    pub fn memo_len(&self) -> usize {
        self.memo.as_ref().map_or(0, |m| m.len())
    }

    pub fn homfly(&mut self, d: &KnotDiagram) -> Result<LaurentPoly2> {
        let d = if self.simplify { d.simplify() } else { d.clone() };
        if d.crossing_count() > self.max_crossings {
            return Err(Error::CrossingBudget { crossings: d.crossing_count(), bound: self.max_crossings });
        }
        if d.crossings.is_empty() && d.free_loops == 0 {
            return Err(Error::InvalidDiagram("empty diagram".into()));
        }
        if let Some(m) = &mut self.memo {
            if m.len() > MEMO_LIMIT {
                m.clear();
            }
        }
        Ok(self.eval(d))
    }

    /// `((a - a^-1) / z)^k`, the value on a `k + 1` component unlink.
    fn mu_pow(&mut self, k: usize) -> LaurentPoly2 {
        while self.mu_powers.len() <= k {
            let mu = LaurentPoly2::from_terms([((1, -1), 1), ((-1, -1), -1)]);
            let next = self.mu_powers.last().unwrap() * &mu;
            self.mu_powers.push(next);
        }
        self.mu_powers[k].clone()
    }

    fn eval(&mut self, d: KnotDiagram) -> LaurentPoly2 {
        let d = if self.simplify { d.simplify() } else { d };
        if d.crossings.is_empty() {
            return self.mu_pow(d.free_loops as usize - 1);
        }
        let key = self.memo.as_ref().map(|_| d.canonical_key());
        if let (Some(m), Some(k)) = (&self.memo, &key) {
            if let Some(p) = m.get(k) {
                return p.clone();
            }
        }

        let (bad, components) = descending_plan(&d, self.simplify);
        let mut acc = LaurentPoly2::zero();
        let mut shift = 0i32;
        let mut cur = d.clone();
        for b in bad {
            let smoothed = cur.smooth(b);
            let p0 = self.eval(smoothed);
            if cur.crossings[b].sign > 0 {
                acc.add_scaled(&p0, 1, shift - 1, 1);
                shift -= 2;
            } else {
                acc.add_scaled(&p0, -1, shift + 1, 1);
                shift += 2;
            }
            cur.switch(b);
        }
        let unlink = self.mu_pow(components + d.free_loops as usize - 1);
        acc.add_scaled(&unlink, 1, shift, 0);

        if let (Some(m), Some(k)) = (&mut self.memo, key) {
            m.insert(k, acc.clone());
        }
        acc
    }
}

/// Crossings to switch, in order, and the number of strand components.
///
/// With `choose_base` each component starts at the label that leaves the
/// fewest crossings to switch; otherwise at its smallest label.
pub(crate) fn descending_plan(d: &KnotDiagram, choose_base: bool) -> (Vec<usize>, usize) {
    let heads = d.heads();
    let comps = d.strand_components();
    let mut visited = vec![false; d.crossings.len()];
    let mut bad = Vec::new();
    for comp in &comps {
        // (crossing, entered on the under-strand) for each passage in order
        let passages: Vec<(usize, bool)> = comp
            .iter()
            .map(|l| {
                let (c, slot) = heads[l];
                (c as usize, slot == 0)
            })
            .collect();
        let n = passages.len();
        let mut best_start = 0;
        if choose_base {
            let mut best = usize::MAX;
            let mut seen = visited.clone();
            for start in 0..n {
                seen.copy_from_slice(&visited);
                let mut count = 0;
                for t in 0..n {
                    let (c, under) = passages[(start + t) % n];
                    if !seen[c] {
                        seen[c] = true;
                        if under {
                            count += 1;
                            if count >= best {
                                break;
                            }
                        }
                    }
                }
                if count < best {
                    best = count;
                    best_start = start;
                    if best == 0 {
                        break;
                    }
                }
            }
        }
        for t in 0..n {
            let (c, under) = passages[(best_start + t) % n];
            if !visited[c] {
                visited[c] = true;
                if under {
                    bad.push(c);
                }
            }
        }
    }
    (bad, comps.len())
}

pub fn homfly(d: &KnotDiagram) -> Result<LaurentPoly2> {
    HomflyEngine::default().homfly(d)
}
