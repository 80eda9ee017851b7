//! Reconnection surveys: band moves at sampled sites and identification of
//! the products.
//!
//! Each conformation is reduced once for a batch of its sites. The reduction
//! keeps the four corners of every site in the batch and treats the square
//! sides joining the two site edges as obstacles, so it is an isotopy of the
//! banded polygon at every site in the batch as well. Bands are then applied
//! to the reduced polygon.

use std::fmt;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{find_noncoherent_sites, ReconnectionSite};
use crate::error::{Error, Result};
use crate::knot::reduce::{reduce_protected, to_p3, Protection, P3};
use crate::knot::{Identification, Identifier, KnotTable, KnotType};
use crate::lattice::{LatticePolygon, Point, Sample};

/// Sites sharing one protected reduction.
pub const DEFAULT_BATCH: usize = 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SitePolicy {
    /// Uniform over (conformation, non-coherent site) pairs, without replacement.
    #[default]
    PerSite,
    /// A uniform conformation, then a uniform site on it, with replacement.
    ConformationFirst,
}

impl fmt::Display for SitePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SitePolicy::PerSite => "per-site",
            SitePolicy::ConformationFirst => "conformation-first",
        })
    }
}

impl std::str::FromStr for SitePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-site" => Ok(SitePolicy::PerSite),
            "conformation-first" => Ok(SitePolicy::ConformationFirst),
            _ => Err(Error::InvalidParameter(format!("unknown site policy `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionRecord {
    pub before: KnotType,
    pub after: Identification,
    pub length: usize,
    /// First corner of the site square.
    pub anchor: Point,
    pub edge_a: usize,
    pub edge_b: usize,
    pub seed: u64,
    pub chain: usize,
    pub step: u64,
}

pub const TRANSITION_HEADER: &str =
    "before_knot,after_knot,polygon_length,anchor_x,anchor_y,anchor_z,edge_a,edge_b,seed,chain,step";

#[derive(Serialize, Deserialize)]
struct Row {
    before_knot: String,
    after_knot: String,
    polygon_length: usize,
    anchor_x: i32,
    anchor_y: i32,
    anchor_z: i32,
    edge_a: usize,
    edge_b: usize,
    seed: u64,
    chain: usize,
    step: u64,
}

pub fn write_transitions<W: std::io::Write>(out: W, records: &[TransitionRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(TRANSITION_HEADER.split(',')).map_err(csv_err)?;
    for r in records {
        w.serialize(Row {
            before_knot: r.before.to_string(),
            after_knot: r.after.to_string(),
            polygon_length: r.length,
            anchor_x: r.anchor.x(),
            anchor_y: r.anchor.y(),
            anchor_z: r.anchor.z(),
            edge_a: r.edge_a,
            edge_b: r.edge_b,
            seed: r.seed,
            chain: r.chain,
            step: r.step,
        })
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn transitions_csv(records: &[TransitionRecord]) -> String {
    let mut buf = Vec::new();
    write_transitions(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

/// Parses transition CSV; errors name the offending line.
pub fn read_transitions<R: std::io::Read>(input: R) -> Result<Vec<TransitionRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, row) in rd.deserialize::<Row>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        let parse = |e: Error| Error::Parse { line, msg: e.to_string() };
        out.push(TransitionRecord {
            before: row.before_knot.parse().map_err(parse)?,
            after: row.after_knot.parse().map_err(parse)?,
            length: row.polygon_length,
            anchor: Point::new(row.anchor_x, row.anchor_y, row.anchor_z),
            edge_a: row.edge_a,
            edge_b: row.edge_b,
            seed: row.seed,
            chain: row.chain,
            step: row.step,
        });
    }
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Applies bands and identifies the products.
#[derive(Clone, Debug)]
pub struct Surveyor<'t> {
    identifier: Identifier<'t>,
    batch: usize,
    seed: u64,
}

impl<'t> Surveyor<'t> {
    /// `seed` fixes the projection directions used for identification.
    pub fn new(table: &'t KnotTable, seed: u64) -> Self {
        Surveyor { identifier: Identifier::new(table, seed), batch: DEFAULT_BATCH, seed }
    }

    pub fn with_batch(mut self, batch: usize) -> Self {
        self.batch = batch.max(1);
        self
    }

    /// Knot types after the band move at each of `sites`, in order. Failed
    /// identifications are reported as `Unknown`.
    pub fn products(&mut self, poly: &LatticePolygon, sites: &[ReconnectionSite]) -> Vec<Identification> {
        let v = to_p3(poly.vertices());
        let n = v.len();
        let mut order: Vec<usize> = (0..sites.len()).collect();
        order.sort_by_key(|&k| sites[k].edge_a);
        let mut out = vec![Identification::Unknown; sites.len()];
        for chunk in order.chunks(self.batch) {
            let mut prot = Protection::default();
            for &k in chunk {
                let s = &sites[k];
                debug_assert!(s.parallel);
                prot.pinned.extend([s.edge_a, s.edge_a + 1, s.edge_b, (s.edge_b + 1) % n]);
                let [u, w, w2, u2] = s.square.map(|p| p.0.map(i64::from));
                prot.obstacles.push((u, u2));
                prot.obstacles.push((w, w2));
            }
            let (reduced, idx) = reduce_protected(&v, &prot);
            for (t, &k) in chunk.iter().enumerate() {
                let (a, b) = (idx[4 * t], idx[4 * t + 2]);
                let banded = band_reduced(&reduced, a, b);
                out[k] = match self.identifier.identify_points(&banded) {
                    Ok((id, _)) => id,
                    Err(e) => {
                        log::warn!("identification failed at edges {}, {}: {e}", sites[k].edge_a, sites[k].edge_b);
                        Identification::Unknown
                    }
                };
            }
        }
        out
    }

    /// Records for the band moves at `sites` on `sample`.
    pub fn survey_sample(
        &mut self,
        before: &KnotType,
        sample: &Sample,
        sites: &[ReconnectionSite],
    ) -> Vec<TransitionRecord> {
        let products = self.products(&sample.polygon, sites);
        sites
            .iter()
            .zip(products)
            .map(|(s, after)| TransitionRecord {
                before: before.clone(),
                after,
                length: sample.polygon.len(),
                anchor: s.square[0],
                edge_a: s.edge_a,
                edge_b: s.edge_b,
                seed: self.seed,
                chain: sample.chain,
                step: sample.step,
            })
            .collect()
    }

    /// Every non-coherent site of `sample`.
    pub fn survey_all(&mut self, before: &KnotType, sample: &Sample) -> Vec<TransitionRecord> {
        let sites = find_noncoherent_sites(&sample.polygon);
        self.survey_sample(before, sample, &sites)
    }
}

/// Band move on a reduced polygon whose site edges start at `a` and `b`.
fn band_reduced(r: &[P3], a: usize, b: usize) -> Vec<P3> {
    let m = r.len();
    let mut out: Vec<P3> = (0..m).map(|t| r[(a + t) % m]).collect();
    let rb = (b + m - a) % m;
    out[1..=rb].reverse();
    out
}

/// Band moves at sites chosen by `policy` among the non-coherent sites of
/// `ensemble`, at most `budget` of them. Records follow ensemble order.
pub fn reconnect_survey<R: Rng>(
    table: &KnotTable,
    before: &KnotType,
    ensemble: &[Sample],
    budget: usize,
    policy: SitePolicy,
    seed: u64,
    rng: &mut R,
) -> Result<Vec<TransitionRecord>> {
    table.record(before)?;
    if budget == 0 || ensemble.is_empty() {
        return Ok(Vec::new());
    }
    let sites: Vec<Vec<ReconnectionSite>> = ensemble.par_iter().map(|s| find_noncoherent_sites(&s.polygon)).collect();
    let empty = sites.iter().filter(|s| s.is_empty()).count();
    if empty > 0 {
        log::info!("{empty} of {} conformations have no non-coherent site", ensemble.len());
    }
    // chosen site indices per conformation
    let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); ensemble.len()];
    match policy {
        SitePolicy::PerSite => {
            let offsets: Vec<usize> = sites
                .iter()
                .scan(0, |acc, s| {
                    let o = *acc;
                    *acc += s.len();
                    Some(o)
                })
                .collect();
            let total: usize = sites.iter().map(Vec::len).sum();
            let mut picks: Vec<usize> =
                if budget >= total { (0..total).collect() } else { index::sample(rng, total, budget).into_vec() };
            picks.sort_unstable();
            let mut c = 0;
            for p in picks {
                while c + 1 < offsets.len() && offsets[c + 1] <= p {
                    c += 1;
                }
                chosen[c].push(p - offsets[c]);
            }
        }
        SitePolicy::ConformationFirst => {
            if empty == ensemble.len() {
                return Ok(Vec::new());
            }
            let mut drawn = 0;
            while drawn < budget {
                let c = rng.gen_range(0..ensemble.len());
                if sites[c].is_empty() {
                    log::debug!("skipping conformation {c} without sites");
                    continue;
                }
                chosen[c].push(rng.gen_range(0..sites[c].len()));
                drawn += 1;
            }
        }
    }
    let jobs: Vec<usize> = (0..ensemble.len()).filter(|&c| !chosen[c].is_empty()).collect();
    let records: Vec<Vec<TransitionRecord>> = jobs
        .par_iter()
        .map_init(
            || Surveyor::new(table, seed),
            |sv, &c| {
                let picked: Vec<ReconnectionSite> = chosen[c].iter().map(|&k| sites[c][k]).collect();
                sv.survey_sample(before, &ensemble[c], &picked)
            },
        )
        .collect();
    Ok(records.into_iter().flatten().collect())
}
