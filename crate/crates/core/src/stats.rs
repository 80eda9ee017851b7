//! Transition probabilities from reconnection records, with confidence
//! intervals from a ratio estimator over contiguous blocks of the event
//! stream.
//!
//! Ambiguous and unknown products are left out of both numerator and
//! denominator and counted separately.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{Identification, KnotType};
use crate::reconnection::TransitionRecord;

pub const DEFAULT_BLOCKS: usize = 100;
/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug)]
pub struct TransitionTally {
    pub start: KnotType,
    outcomes: Vec<KnotType>,
    index: BTreeMap<KnotType, u32>,
    /// Outcome index of each counted event, in stream order.
    events: Vec<u32>,
    /// Polygon length of each counted event; empty for synthetic tallies.
    lengths: Vec<u32>,
    excluded: BTreeMap<String, u64>,
    length_range: Option<(usize, usize)>,
}

impl TransitionTally {
    pub fn new(start: KnotType) -> Self {
        TransitionTally {
            start,
            outcomes: Vec::new(),
            index: BTreeMap::new(),
            events: Vec::new(),
            lengths: Vec::new(),
            excluded: BTreeMap::new(),
            length_range: None,
        }
    }

    /// A tally with the given counts and no length data. Events of each
    /// outcome are spread evenly over the stream.
    pub fn from_counts(start: KnotType, counts: &[(KnotType, u64)], total: u64) -> Result<Self> {
        let named: u64 = counts.iter().map(|c| c.1).sum();
        if named > total {
            return Err(Error::InvalidParameter(format!("{named} counted events exceed the total {total}")));
        }
        let mut t = TransitionTally::new(start.clone());
        let rest = t.outcome_index(&start);
        t.events = vec![rest; total as usize];
        for (k, c) in counts {
            let id = t.outcome_index(k);
            if id == rest {
                continue;
            }
            for j in 0..*c {
                // evenly spaced positions, moving past ones already taken
                let mut pos = ((j as u128 * total as u128) / *c as u128) as usize;
                while t.events[pos] != rest {
                    pos = (pos + 1) % total as usize;
                }
                t.events[pos] = id;
            }
        }
        Ok(t)
    }

    fn outcome_index(&mut self, k: &KnotType) -> u32 {
        if let Some(&i) = self.index.get(k) {
            return i;
        }
        let i = self.outcomes.len() as u32;
        self.outcomes.push(k.clone());
        self.index.insert(k.clone(), i);
        i
    }

    /// Makes `k` a reported outcome even if it is never observed.
    pub fn watch(&mut self, k: &KnotType) {
        self.outcome_index(k);
    }

    pub fn push(&mut self, after: &Identification, length: usize) {
        self.length_range = Some(match self.length_range {
            None => (length, length),
            Some((lo, hi)) => (lo.min(length), hi.max(length)),
        });
        match after {
            Identification::Identified(k) => {
                let i = self.outcome_index(k);
                self.events.push(i);
                self.lengths.push(length as u32);
            }
            other => *self.excluded.entry(other.to_string()).or_default() += 1,
        }
    }

    /// One tally per starting type, in order of first appearance.
    pub fn from_records(records: &[TransitionRecord]) -> Vec<TransitionTally> {
        let mut tallies: Vec<TransitionTally> = Vec::new();
        let mut by_start: BTreeMap<KnotType, usize> = BTreeMap::new();
        for r in records {
            let i = *by_start.entry(r.before.clone()).or_insert_with(|| {
                tallies.push(TransitionTally::new(r.before.clone()));
                tallies.len() - 1
            });
            tallies[i].push(&r.after, r.length);
        }
        tallies
    }

    /// Identified events, the denominator of every estimate.
    pub fn total_events(&self) -> u64 {
        self.events.len() as u64
    }

    pub fn excluded(&self) -> u64 {
        self.excluded.values().sum()
    }

    pub fn excluded_by_kind(&self) -> &BTreeMap<String, u64> {
        &self.excluded
    }

    pub fn counts(&self) -> BTreeMap<KnotType, u64> {
        let mut c = vec![0u64; self.outcomes.len()];
        for &e in &self.events {
            c[e as usize] += 1;
        }
        self.outcomes.iter().cloned().zip(c).collect()
    }

    pub fn outcomes(&self) -> &[KnotType] {
        &self.outcomes
    }

    pub fn length_histogram(&self) -> BTreeMap<usize, u64> {
        let mut h = BTreeMap::new();
        for &l in &self.lengths {
            *h.entry(l as usize).or_default() += 1;
        }
        h
    }

    /// Smallest and largest length over all events, excluded ones included.
    pub fn sampled_length_range(&self) -> Option<(usize, usize)> {
        self.length_range
    }

    /// Length range of the events ending in `target`.
    pub fn length_range_to(&self, target: &KnotType) -> Option<(usize, usize)> {
        let id = *self.index.get(target)?;
        let mut range: Option<(usize, usize)> = None;
        for (&e, &l) in self.events.iter().zip(&self.lengths) {
            if e == id {
                let l = l as usize;
                range = Some(range.map_or((l, l), |(lo, hi)| (lo.min(l), hi.max(l))));
            }
        }
        range
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityEstimate {
    pub p_hat: f64,
    /// 95% interval; absent when nothing was observed.
    pub ci: Option<(f64, f64)>,
    pub n_blocks: usize,
    pub observed: u64,
    pub total: u64,
}

/// Ratio estimate of `P(start -> target)` over `n_blocks` contiguous blocks.
pub fn estimate_probability(
    tally: &TransitionTally,
    target: &KnotType,
    n_blocks: usize,
) -> Result<ProbabilityEstimate> {
    let total = tally.events.len();
    if total == 0 {
        return Err(Error::InvalidParameter(format!("no identified events from {}", tally.start)));
    }
    if n_blocks < 2 {
        return Err(Error::InvalidParameter("at least two blocks are needed".into()));
    }
    if n_blocks > total {
        return Err(Error::InvalidParameter(format!("{n_blocks} blocks for {total} events")));
    }
    let id = tally.index.get(target).copied();
    let hit = |e: &u32| Some(*e) == id;
    let observed = tally.events.iter().filter(|e| hit(e)).count() as u64;
    let p_hat = observed as f64 / total as f64;
    let ci = if observed == 0 {
        None
    } else {
        let mut ss = 0.0;
        for b in 0..n_blocks {
            let (lo, hi) = (b * total / n_blocks, (b + 1) * total / n_blocks);
            let x = tally.events[lo..hi].iter().filter(|e| hit(e)).count() as f64;
            let y = (hi - lo) as f64;
            ss += (x - p_hat * y).powi(2);
        }
        let y_bar = total as f64 / n_blocks as f64;
        let var = ss / ((n_blocks - 1) as f64 * n_blocks as f64 * y_bar * y_bar);
        let half = Z95 * var.sqrt();
        Some(((p_hat - half).max(0.0), (p_hat + half).min(1.0)))
    };
    Ok(ProbabilityEstimate { p_hat, ci, n_blocks, observed, total: total as u64 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub start: KnotType,
    pub target: KnotType,
    pub estimate: ProbabilityEstimate,
    pub excluded: u64,
    /// Lengths of the events ending in `target`.
    pub lengths: Option<(usize, usize)>,
    /// Lengths of all events from `start`.
    pub sampled_lengths: Option<(usize, usize)>,
}

/// One row per start and outcome, outcomes in order of first appearance.
/// Tallies without identified events give no rows.
pub fn report(tallies: &[TransitionTally], n_blocks: usize) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for t in tallies {
        if t.total_events() == 0 {
            continue;
        }
        let blocks = n_blocks.min(t.events.len()).max(2.min(t.events.len()));
        for target in &t.outcomes {
            let estimate = if blocks >= 2 {
                estimate_probability(t, target, blocks)?
            } else {
                let observed = t.events.iter().filter(|&&e| t.outcomes[e as usize] == *target).count() as u64;
                ProbabilityEstimate { p_hat: observed as f64, ci: None, n_blocks: 1, observed, total: 1 }
            };
            rows.push(ReportRow {
                start: t.start.clone(),
                target: target.clone(),
                estimate,
                excluded: t.excluded(),
                lengths: t.length_range_to(target),
                sampled_lengths: t.sampled_length_range(),
            });
        }
    }
    Ok(rows)
}

pub const REPORT_HEADER: &str =
    "start,target,p_hat,ci_low,ci_high,observed,total,excluded,n_blocks,len_min,len_max,sampled_min,sampled_max";

pub fn report_csv(rows: &[ReportRow]) -> String {
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:e}"));
    let opt_u = |x: Option<usize>| x.map_or(String::new(), |v| v.to_string());
    let mut s = String::from(REPORT_HEADER);
    s.push('\n');
    for r in rows {
        let e = &r.estimate;
        s.push_str(&format!(
            "{},{},{:e},{},{},{},{},{},{},{},{},{},{}\n",
            r.start,
            r.target,
            e.p_hat,
            opt(e.ci.map(|c| c.0)),
            opt(e.ci.map(|c| c.1)),
            e.observed,
            e.total,
            r.excluded,
            e.n_blocks,
            opt_u(r.lengths.map(|l| l.0)),
            opt_u(r.lengths.map(|l| l.1)),
            opt_u(r.sampled_lengths.map(|l| l.0)),
            opt_u(r.sampled_lengths.map(|l| l.1)),
        ));
    }
    s
}

/// Fixed-width table with probabilities in units of 1e-5.
pub fn report_text(rows: &[ReportRow]) -> String {
    let mut s = format!(
        "{:<8} {:<8} {:>12} {:>20} {:>9} {:>10} {:>14}\n",
        "start", "target", "P x 1e-5", "95% interval", "observed", "events", "[lmin, lmax]"
    );
    for r in rows {
        let e = &r.estimate;
        let ci = e.ci.map_or("---".to_string(), |(lo, hi)| format!("[{:.3}, {:.3}]", lo * 1e5, hi * 1e5));
        let range = r.sampled_lengths.map_or("---".to_string(), |(lo, hi)| format!("[{lo}, {hi}]"));
        s.push_str(&format!(
            "{:<8} {:<8} {:>12.3} {:>20} {:>9} {:>10} {:>14}\n",
            r.start.to_string(),
            r.target.to_string(),
            e.p_hat * 1e5,
            ci,
            e.observed,
            e.total,
            range
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> KnotType {
        s.parse().unwrap()
    }

    #[test]
    fn table_row_for_5_1() {
        let t = TransitionTally::from_counts(k("5_1"), &[(k("5_1*"), 104)], 3_000_000).unwrap();
        let e = estimate_probability(&t, &k("5_1*"), 100).unwrap();
        assert_eq!(e.observed, 104);
        assert_eq!(e.p_hat, 104.0 / 3e6);
        assert_eq!(format!("{:.3}", e.p_hat * 1e5), "3.467");
        let (lo, hi) = e.ci.unwrap();
        assert!(lo < e.p_hat && e.p_hat < hi);
    }

    #[test]
    fn zero_count_has_no_interval() {
        let mut t = TransitionTally::from_counts(k("8_8"), &[], 1000).unwrap();
        t.watch(&k("8_8*"));
        let e = estimate_probability(&t, &k("8_8*"), 10).unwrap();
        assert_eq!(e.p_hat, 0.0);
        assert!(e.ci.is_none());
        let rows = report(&[t], 10).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(report_text(&rows).contains("---"));
    }

    #[test]
    fn identical_blocks_give_zero_width() {
        // one hit in every block of ten
        let mut t = TransitionTally::new(k("3_1"));
        for i in 0..100 {
            let after = if i % 10 == 0 { k("3_1*") } else { k("3_1") };
            t.push(&Identification::Identified(after), 30);
        }
        let e = estimate_probability(&t, &k("3_1*"), 10).unwrap();
        assert_eq!(e.p_hat, 0.1);
        assert_eq!(e.ci, Some((0.1, 0.1)));
    }

    #[test]
    fn hand_computed_interval() {
        // blocks of 4 with hits 0, 2: p = 1/4, s^2 = (1 + 1) / 1, var = 2 / (2 * 16)
        let mut t = TransitionTally::new(k("3_1"));
        for hit in [false, false, false, false, true, true, false, false] {
            t.push(&Identification::Identified(if hit { k("0_1") } else { k("3_1") }), 20);
        }
        let e = estimate_probability(&t, &k("0_1"), 2).unwrap();
        let half = Z95 * (2.0f64 / 32.0).sqrt();
        let (lo, hi) = e.ci.unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - (0.25 + half)).abs() < 1e-15);
    }

    #[test]
    fn block_count_checks() {
        let t = TransitionTally::from_counts(k("3_1"), &[(k("0_1"), 1)], 5).unwrap();
        assert!(estimate_probability(&t, &k("0_1"), 6).is_err());
        assert!(estimate_probability(&t, &k("0_1"), 1).is_err());
        assert!(estimate_probability(&TransitionTally::new(k("3_1")), &k("0_1"), 2).is_err());
        assert!(TransitionTally::from_counts(k("3_1"), &[(k("0_1"), 6)], 5).is_err());
    }

    #[test]
    fn p_hat_ignores_blocks_and_scale() {
        let t = TransitionTally::from_counts(k("8_20"), &[(k("8_20*"), 37), (k("0_1"), 500)], 9000).unwrap();
        let t2 = TransitionTally::from_counts(k("8_20"), &[(k("8_20*"), 74), (k("0_1"), 1000)], 18000).unwrap();
        let p: Vec<f64> =
            [2, 7, 100, 1000].iter().map(|&b| estimate_probability(&t, &k("8_20*"), b).unwrap().p_hat).collect();
        assert!(p.iter().all(|&x| x == p[0]));
        assert_eq!(estimate_probability(&t2, &k("8_20*"), 100).unwrap().p_hat, p[0]);
        assert_eq!(t.counts()[&k("0_1")], 500);
        assert_eq!(t.counts()[&k("8_20*")], 37);
    }

    #[test]
    fn excluded_outcomes_stay_out() {
        let mut t = TransitionTally::new(k("5_1"));
        t.push(&Identification::Identified(k("5_1*")), 42);
        t.push(&Identification::Ambiguous(vec![k("5_1"), k("10_132*")]), 44);
        t.push(&Identification::Unknown, 2016);
        t.push(&Identification::Identified(k("0_1")), 50);
        assert_eq!(t.total_events(), 2);
        assert_eq!(t.excluded(), 2);
        assert_eq!(t.sampled_length_range(), Some((42, 2016)));
        assert_eq!(t.length_range_to(&k("5_1*")), Some((42, 42)));
        assert_eq!(t.length_histogram().len(), 2);
        let rows = report(&[t], 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].estimate.p_hat, 0.5);
        let csv = report_csv(&rows);
        assert!(csv.starts_with(REPORT_HEADER));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn empty_report() {
        assert!(report(&[], 100).unwrap().is_empty());
        assert_eq!(report_csv(&[]).trim(), REPORT_HEADER);
    }
}
