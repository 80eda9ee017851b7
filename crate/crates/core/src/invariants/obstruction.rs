//! Signature obstruction to band surgery between quasi-alternating knots of
//! equal square-free determinant, and the table-wide classification.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::lens::is_square_free;
use crate::error::{Error, Result};
use crate::knot::{KnotRecord, KnotTable, KnotType};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Excluded,
    NotExcluded,
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reason {
    NotQuasiAlternating(Vec<String>),
    DeterminantsDiffer(u64, u64),
    DeterminantNotSquareFree(u64),
    /// The signature difference is neither 0 nor 8.
    SignatureJump(u32),
    /// The signature difference is 0 or 8; no conclusion about a band.
    NoConclusion(u32),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::NotQuasiAlternating(ks) => {
                write!(f, "not quasi-alternating: {}", ks.join(", "))
            }
            Reason::DeterminantsDiffer(a, b) => write!(f, "determinants differ ({a} vs {b})"),
            Reason::DeterminantNotSquareFree(d) => write!(f, "determinant {d} is not square-free"),
            Reason::SignatureJump(s) => write!(f, "|signature difference| = {s}, not 0 or 8"),
            Reason::NoConclusion(s) => {
                write!(f, "|signature difference| = {s}; not obstructed, existence of a band not implied")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub status: Status,
    pub reason: Reason,
}

/// `delta = -signature / 2`, valid for quasi-alternating knots and knots
/// with at most nine crossings other than 8_19.
pub fn delta_from_signature(rec: &KnotRecord) -> Result<i32> {
    let small = rec.knot.crossing_number <= 9 && rec.knot.name != "8_19";
    if !rec.qa && !small {
        return Err(Error::Hypothesis(format!(
            "{} is neither quasi-alternating nor covered by the small-crossing case",
            rec.knot
        )));
    }
    if rec.signature % 2 != 0 {
        return Err(Error::Hypothesis(format!("odd signature on {}", rec.knot)));
    }
    Ok(-rec.signature / 2)
}

pub fn band_obstruction(a: &KnotRecord, b: &KnotRecord) -> ObstructionVerdict {
    let inapplicable = |reason| ObstructionVerdict { status: Status::Inapplicable, reason };
    let not_qa: Vec<String> = [a, b].iter().filter(|r| !r.qa).map(|r| r.knot.to_string()).collect();
    if !not_qa.is_empty() {
        return inapplicable(Reason::NotQuasiAlternating(not_qa));
    }
    if a.det != b.det {
        return inapplicable(Reason::DeterminantsDiffer(a.det, b.det));
    }
    if !is_square_free(a.det).unwrap_or(false) {
        return inapplicable(Reason::DeterminantNotSquareFree(a.det));
    }
    let jump = (a.signature - b.signature).unsigned_abs();
    if jump == 0 || jump == 8 {
        ObstructionVerdict { status: Status::NotExcluded, reason: Reason::NoConclusion(jump) }
    } else {
        ObstructionVerdict { status: Status::Excluded, reason: Reason::SignatureJump(jump) }
    }
}

/// `|Δσ| ≡ |Δdet| (mod 4)`.
pub fn murasugi_congruence_check(a: &KnotRecord, b: &KnotRecord) -> bool {
    let ds = (a.signature as i64 - b.signature as i64).abs();
    let dd = (a.det as i64 - b.det as i64).abs();
    ds % 4 == dd % 4
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub a: KnotType,
    pub b: KnotType,
    pub det: u64,
    pub verdict: ObstructionVerdict,
}

/// Verdicts for every unordered pair of distinct nontrivial knots of equal
/// determinant among the tabulated knots of at most eight crossings.
pub fn table_classification(table: &KnotTable) -> Vec<PairVerdict> {
    let recs: Vec<&KnotRecord> = table.primary().filter(|r| !r.knot.is_unknot()).collect();
    let mut out = Vec::new();
    for (i, a) in recs.iter().enumerate() {
        for b in &recs[i + 1..] {
            if a.det == b.det {
                out.push(PairVerdict {
                    a: a.knot.clone(),
                    b: b.knot.clone(),
                    det: a.det,
                    verdict: band_obstruction(a, b),
                });
            }
        }
    }
    out
}

pub fn classification_csv(pairs: &[PairVerdict]) -> String {
    let mut s = String::from("det,knot_a,knot_b,status,reason\n");
    for p in pairs {
        s.push_str(&format!("{},{},{},{:?},\"{}\"\n", p.det, p.a, p.b, p.verdict.status, p.verdict.reason));
    }
    s
}

/// One matrix per determinant: `X` excluded, `o` not excluded, `.` inapplicable.
pub fn classification_matrix(table: &KnotTable, pairs: &[PairVerdict]) -> String {
    let mut groups: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    for r in table.primary().filter(|r| !r.knot.is_unknot()) {
        groups.entry(r.det).or_default().push(r.knot.to_string());
    }
    let lookup: BTreeMap<(String, String), Status> = pairs
        .iter()
        .flat_map(|p| {
            [
                ((p.a.to_string(), p.b.to_string()), p.verdict.status),
                ((p.b.to_string(), p.a.to_string()), p.verdict.status),
            ]
        })
        .collect();
    let mut s = String::new();
    for (det, names) in groups {
        if names.len() < 2 {
            continue;
        }
        let sf = is_square_free(det).unwrap_or(false);
        s.push_str(&format!("det {det}{}\n", if sf { "" } else { " (not square-free)" }));
        let w = names.iter().map(|n| n.len()).max().unwrap_or(0) + 1;
        s.push_str(&format!("{:w$}", ""));
        for n in &names {
            s.push_str(&format!("{n:>w$}"));
        }
        s.push('\n');
        for a in &names {
            s.push_str(&format!("{a:w$}"));
            for b in &names {
                let c = if a == b {
                    "-"
                } else {
                    match lookup.get(&(a.clone(), b.clone())) {
                        Some(Status::Excluded) => "X",
                        Some(Status::NotExcluded) => "o",
                        _ => ".",
                    }
                };
                s.push_str(&format!("{c:>w$}"));
            }
            s.push('\n');
        }
        s.push('\n');
    }
    s
}
