//! BFACF Markov chain on self-avoiding polygons of fixed knot type.
//!
//! A step picks an edge uniformly and one of the four unit directions
//! perpendicular to it, then tries to translate the edge by that direction.
//! Depending on which neighbours already sit at the translated corners the
//! move adds two edges, flips a corner, or removes two edges. Acceptance is
//! Metropolis for the stationary weight `z^n` on polygons of length `n`.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{perpendicular_steps, LatticePolygon, Point};

/// Upper end of the admissible step fugacity range.
pub const Z_MAX: f64 = 0.2135;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FugacityParams {
    pub q: f64,
    pub z: f64,
}

impl FugacityParams {
    pub fn new(z: f64) -> Result<Self> {
        if !(z > 0.0 && z < Z_MAX) {
            return Err(Error::InvalidParameter(format!("step fugacity {z} outside (0, {Z_MAX})")));
        }
        Ok(FugacityParams { q: 1.0, z })
    }
}

/// Length change of a BFACF move.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Grow,
    Flip,
    Shrink,
}

#[derive(Clone, Debug)]
pub struct ChainState {
    vertices: Vec<Point>,
    occupied: FxHashSet<u64>,
    params: FugacityParams,
    rng: Xoshiro256PlusPlus,
    seed: u64,
    step_count: u64,
    max_length: Option<usize>,
}

impl ChainState {
    pub fn new(polygon: LatticePolygon, params: FugacityParams, seed: u64) -> Result<Self> {
        Self::with_rng(polygon, params, seed, Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// State whose generator is `rng`; `seed` is recorded for provenance.
    pub fn with_rng(
        polygon: LatticePolygon,
        params: FugacityParams,
        seed: u64,
        rng: Xoshiro256PlusPlus,
    ) -> Result<Self> {
        FugacityParams::new(params.z)?;
        let report = polygon.validate();
        if !report.valid {
            return Err(Error::InvalidPolygon(format!("{:?}", report.violations)));
        }
        let vertices = polygon.into_vertices();
        let occupied = vertices.iter().map(|p| p.key()).collect();
        Ok(ChainState { vertices, occupied, params, rng, seed, step_count: 0, max_length: None })
    }

    /// Rejects growth beyond `max_length` edges.
    pub fn with_max_length(mut self, max_length: usize) -> Result<Self> {
        if max_length < self.vertices.len() {
            return Err(Error::InvalidParameter(format!(
                "length cap {max_length} below current length {}",
                self.vertices.len()
            )));
        }
        self.max_length = Some(max_length);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn polygon(&self) -> LatticePolygon {
        LatticePolygon::from_vertices_unchecked(self.vertices.clone())
    }

    pub fn params(&self) -> FugacityParams {
        self.params
    }

    pub fn z(&self) -> f64 {
        self.params.z
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn rng_mut(&mut self) -> &mut Xoshiro256PlusPlus {
        &mut self.rng
    }

    /// Exchanges conformations with `other`, keeping fugacities and generators.
    pub(crate) fn swap_conformation(&mut self, other: &mut ChainState) {
        std::mem::swap(&mut self.vertices, &mut other.vertices);
        std::mem::swap(&mut self.occupied, &mut other.occupied);
    }

    /// One proposal. Returns the move made, or `None` when rejected.
    pub fn step(&mut self) -> Option<MoveKind> {
        self.step_count += 1;
        let n = self.vertices.len();
        let i = self.rng.gen_range(0..n);
        let k = self.rng.gen_range(0..4);
        let a = self.vertices[i];
        let b = self.vertices[(i + 1) % n];
        let d = perpendicular_steps(b - a)[k];
        let (a2, b2) = (a + d, b + d);
        let p = self.vertices[(i + n - 1) % n];
        let q = self.vertices[(i + 2) % n];
        let kind = match (p == a2, q == b2) {
            (true, true) => {
                if n <= 4 {
                    return None;
                }
                self.remove_pair(i);
                MoveKind::Shrink
            }
            (true, false) => {
                if self.occupied.contains(&b2.key()) {
                    return None;
                }
                // a -> b2: path p, b2, b, q
                self.occupied.remove(&a.key());
                self.occupied.insert(b2.key());
                self.vertices[i] = b2;
                MoveKind::Flip
            }
            (false, true) => {
                if self.occupied.contains(&a2.key()) {
                    return None;
                }
                let j = (i + 1) % n;
                self.occupied.remove(&b.key());
                self.occupied.insert(a2.key());
                self.vertices[j] = a2;
                MoveKind::Flip
            }
            (false, false) => {
                if self.max_length.is_some_and(|m| n + 2 > m) {
                    return None;
                }
                if self.occupied.contains(&a2.key()) || self.occupied.contains(&b2.key()) {
                    return None;
                }
                let z = self.params.z;
                let accept = z * z * n as f64 / (n + 2) as f64;
                if self.rng.gen::<f64>() >= accept {
                    return None;
                }
                self.occupied.insert(a2.key());
                self.occupied.insert(b2.key());
                if i + 1 < n {
                    self.vertices.splice(i + 1..i + 1, [a2, b2]);
                } else {
                    self.vertices.extend_from_slice(&[a2, b2]);
                }
                MoveKind::Grow
            }
        };
        self.debug_check_local(i);
        Some(kind)
    }

    fn remove_pair(&mut self, i: usize) {
        let n = self.vertices.len();
        let j = (i + 1) % n;
        self.occupied.remove(&self.vertices[i].key());
        self.occupied.remove(&self.vertices[j].key());
        if j > i {
            self.vertices.drain(i..=j);
        } else {
            self.vertices.pop();
            self.vertices.remove(0);
        }
    }

    #[inline]
    fn debug_check_local(&self, i: usize) {
        if cfg!(debug_assertions) {
            let n = self.vertices.len();
            debug_assert_eq!(self.occupied.len(), n, "occupancy out of sync");
            for t in 0..5 {
                let u = (i + n + t - 2) % n;
                let w = (u + 1) % n;
                debug_assert!((self.vertices[w] - self.vertices[u]).is_unit(), "broken step at {u}");
            }
        }
    }

    /// Runs `n_steps` proposals, recording a sample every `sample_interval`
    /// steps. Samples are validated in full.
    pub fn run(&mut self, n_steps: u64, sample_interval: u64) -> Result<Vec<LatticePolygon>> {
        if sample_interval == 0 {
            return Err(Error::InvalidParameter("sample interval must be positive".into()));
        }
        let mut samples = Vec::with_capacity((n_steps / sample_interval) as usize);
        for t in 1..=n_steps {
            self.step();
            if t % sample_interval == 0 {
                let poly = LatticePolygon::new(self.vertices.clone())?;
                samples.push(poly);
            }
        }
        Ok(samples)
    }
}

/// Runs a chain and returns its final state with the samples.
pub fn run_chain(
    mut state: ChainState,
    n_steps: u64,
    sample_interval: u64,
) -> Result<(ChainState, Vec<LatticePolygon>)> {
    let samples = state.run(n_steps, sample_interval)?;
    Ok((state, samples))
}
