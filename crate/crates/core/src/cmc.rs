//! Composite Markov chain: BFACF chains at increasing fugacities with
//! Metropolis exchange of conformations between neighbours.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bfacf::{ChainState, FugacityParams};
use crate::error::{Error, Result};
use crate::lattice::LatticePolygon;

pub const DEFAULT_Z_MIN: f64 = 0.117;
pub const DEFAULT_Z_MAX: f64 = 0.2125;
pub const DEFAULT_CHAINS: usize = 8;

/// `n` fugacities geometrically spaced over `[lo, hi]`.
pub fn geometric_ladder(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || lo.is_nan() || lo <= 0.0 || hi < lo {
        return Err(Error::InvalidParameter(format!("ladder [{lo}, {hi}] with {n} rungs")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let r = (hi / lo).powf(1.0 / (n - 1) as f64);
    Ok((0..n).map(|k| if k == n - 1 { hi } else { lo * r.powi(k as i32) }).collect())
}

pub fn default_ladder() -> Vec<f64> {
    geometric_ladder(DEFAULT_Z_MIN, DEFAULT_Z_MAX, DEFAULT_CHAINS).expect("valid default ladder")
}

/// Acceptance probability for swapping conformations of lengths `n_i`, `n_j`
/// between chains at fugacities `z_i`, `z_j`.
pub fn swap_probability(z_i: f64, n_i: usize, z_j: f64, n_j: usize) -> f64 {
    let exponent = n_j as f64 - n_i as f64;
    (z_i / z_j).powf(exponent).min(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangeRecord {
    pub step: u64,
    /// Lower index of the adjacent pair.
    pub pair: usize,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct CmcEnsemble {
    chains: Vec<ChainState>,
    exchange_interval: u64,
    exchange_log: Vec<ExchangeRecord>,
    rng: Xoshiro256PlusPlus,
    step: u64,
    parallel: bool,
}

impl CmcEnsemble {
    /// Chains at the fugacities in `zs`, all started from `start`. Chain `k`
    /// uses the generator stream obtained by `k + 1` jumps from `seed`; the
    /// exchange generator uses the unjumped stream.
    pub fn new(start: &LatticePolygon, zs: &[f64], exchange_interval: u64, seed: u64) -> Result<Self> {
        if zs.is_empty() {
            return Err(Error::InvalidParameter("no fugacities".into()));
        }
        if zs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("fugacities must increase strictly".into()));
        }
        if exchange_interval == 0 {
            return Err(Error::InvalidParameter("exchange interval must be positive".into()));
        }
        let base = Xoshiro256PlusPlus::seed_from_u64(seed);
        let mut stream = base.clone();
        let mut chains = Vec::with_capacity(zs.len());
        for &z in zs {
            stream.jump();
            chains.push(ChainState::with_rng(start.clone(), FugacityParams::new(z)?, seed, stream.clone())?);
        }
        Ok(CmcEnsemble { chains, exchange_interval, exchange_log: Vec::new(), rng: base, step: 0, parallel: true })
    }

    /// Runs chains on the current thread only.
    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn chains(&self) -> &[ChainState] {
        &self.chains
    }

    pub fn chains_mut(&mut self) -> &mut [ChainState] {
        &mut self.chains
    }

    pub fn exchange_interval(&self) -> u64 {
        self.exchange_interval
    }

    pub fn exchange_log(&self) -> &[ExchangeRecord] {
        &self.exchange_log
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn fugacities(&self) -> Vec<f64> {
        self.chains.iter().map(|c| c.z()).collect()
    }

    /// Proposes one swap between a uniformly chosen adjacent pair.
    pub fn exchange(&mut self) -> Result<Option<bool>> {
        if self.chains.len() < 2 {
            return Ok(None);
        }
        let i = self.rng.gen_range(0..self.chains.len() - 1);
        let (lo, hi) = self.chains.split_at_mut(i + 1);
        let (a, b) = (&mut lo[i], &mut hi[0]);
        if a.z() >= b.z() {
            return Err(Error::InvalidParameter("fugacities must increase strictly".into()));
        }
        let p = swap_probability(a.z(), a.len(), b.z(), b.len());
        let accepted = p >= 1.0 || self.rng.gen::<f64>() < p;
        if accepted {
            a.swap_conformation(b);
        }
        self.exchange_log.push(ExchangeRecord { step: self.step, pair: i, accepted });
        Ok(Some(accepted))
    }

    /// Advances every chain by `n_steps`, exchanging after each full interval.
    /// `on_sample(chain, step, state)` is called every `sample_interval` steps.
    pub fn run<F>(&mut self, n_steps: u64, sample_interval: u64, mut on_sample: F) -> Result<()>
    where
        F: FnMut(usize, u64, &ChainState),
    {
        if sample_interval == 0 {
            return Err(Error::InvalidParameter("sample interval must be positive".into()));
        }
        let target = self.step + n_steps;
        while self.step < target {
            let next_exchange = (self.step / self.exchange_interval + 1) * self.exchange_interval;
            let next_sample = (self.step / sample_interval + 1) * sample_interval;
            let stop = next_exchange.min(next_sample).min(target);
            let burst = stop - self.step;
            if self.parallel {
                self.chains.par_iter_mut().for_each(|c| {
                    for _ in 0..burst {
                        c.step();
                    }
                });
            } else {
                for c in &mut self.chains {
                    for _ in 0..burst {
                        c.step();
                    }
                }
            }
            self.step = stop;
            if self.step.is_multiple_of(sample_interval) {
                for (k, c) in self.chains.iter().enumerate() {
                    on_sample(k, self.step, c);
                }
            }
            if self.step.is_multiple_of(self.exchange_interval) {
                self.exchange()?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_ladder_spans_range() {
        let zs = default_ladder();
        assert_eq!(zs.len(), 8);
        assert_eq!(zs[0], 0.117);
        assert_eq!(zs[7], 0.2125);
        let r = zs[1] / zs[0];
        assert!((r - 1.0890).abs() < 1e-3);
        for w in zs.windows(2) {
            assert!((w[1] / w[0] - r).abs() < 1e-9);
        }
    }

    #[test]
    fn swap_formula() {
        assert_eq!(swap_probability(0.15, 40, 0.2, 40), 1.0);
        let p = swap_probability(0.15, 40, 0.2, 44);
        assert!((p - (0.75f64).powi(4)).abs() < 1e-12);
        assert_eq!(swap_probability(0.15, 44, 0.2, 40), 1.0);
    }

    #[test]
    fn rejects_bad_ladders() {
        let sq = LatticePolygon::unit_square();
        assert!(CmcEnsemble::new(&sq, &[0.2, 0.1], 10, 0).is_err());
        assert!(CmcEnsemble::new(&sq, &[0.1, 0.1], 10, 0).is_err());
        assert!(CmcEnsemble::new(&sq, &[0.1, 0.2], 0, 0).is_err());
        assert!(CmcEnsemble::new(&sq, &[0.1, 0.3], 10, 0).is_err());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let sq = LatticePolygon::unit_square();
        let zs = [0.15, 0.18, 0.2];
        let mut a = CmcEnsemble::new(&sq, &zs, 7, 99).unwrap();
        let mut b = CmcEnsemble::new(&sq, &zs, 7, 99).unwrap().sequential();
        let mut la = Vec::new();
        let mut lb = Vec::new();
        a.run(3000, 50, |k, s, c| la.push((k, s, c.polygon()))).unwrap();
        b.run(3000, 50, |k, s, c| lb.push((k, s, c.polygon()))).unwrap();
        assert_eq!(la, lb);
        assert_eq!(a.exchange_log(), b.exchange_log());
        assert_eq!(a.exchange_log().len(), 3000 / 7);
    }
}
