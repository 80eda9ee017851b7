//! Bundled table of prime knots up to eight crossings, their mirrors, and the
//! ten-crossing knots sharing a polynomial with 5_1 and 8_8.
//!
//! Naming follows the convention that the unstarred chiral knot has negative
//! signature; for signature-zero chiral knots the bundled diagram is the
//! unstarred one.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::diagram::KnotDiagram;
use super::homfly::{HomflyEngine, DEFAULT_MAX_CROSSINGS};
use super::kauffman::KauffmanEngine;
use super::poly::LaurentPoly2;
use crate::error::{Error, Result};
use crate::lattice::{from_braid, read_polygons, LatticePolygon};

const KNOTS_CSV: &str = include_str!("../../data/knots.csv");
const KNOTS_PD: &str = include_str!("../../data/knots.pd");
const BRAIDS: &str = include_str!("../../data/braids.txt");

/// Minimal-length conformations found by low-fugacity BFACF runs.
const MINIMAL: [(&str, &str); 3] = [
    ("3_1", include_str!("../../data/minimal/3_1.txt")),
    ("4_1", include_str!("../../data/minimal/4_1.txt")),
    ("5_1", include_str!("../../data/minimal/5_1.txt")),
];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnotType {
    pub name: String,
    pub mirror: bool,
    pub crossing_number: u32,
}

impl KnotType {
    pub fn unknot() -> Self {
        KnotType { name: "0_1".into(), mirror: false, crossing_number: 0 }
    }

    /// The mirror type; `chiral` says whether it differs.
    pub fn mirrored(&self, chiral: bool) -> Self {
        KnotType { mirror: chiral && !self.mirror, ..self.clone() }
    }

    pub fn is_unknot(&self) -> bool {
        self.crossing_number == 0
    }
}

impl fmt::Display for KnotType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, if self.mirror { "*" } else { "" })
    }
}

impl FromStr for KnotType {
    type Err = Error;

    /// Parses `8_20` or `8_20*`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (base, mirror) = match s.strip_suffix('*') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let (c, _) = base.split_once('_').ok_or_else(|| Error::UnknownKnot(s.into()))?;
        let crossing_number = c.parse().map_err(|_| Error::UnknownKnot(s.into()))?;
        Ok(KnotType { name: base.into(), mirror, crossing_number })
    }
}

impl Serialize for KnotType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KnotType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "types")]
pub enum Identification {
    Identified(KnotType),
    Ambiguous(Vec<KnotType>),
    Unknown,
}

impl Identification {
    pub fn knot(&self) -> Option<&KnotType> {
        match self {
            Identification::Identified(k) => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for Identification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identification::Identified(k) => write!(f, "{k}"),
            Identification::Ambiguous(ks) => {
                let names: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                write!(f, "ambiguous({})", names.join("|"))
            }
            Identification::Unknown => write!(f, "unknown"),
        }
    }
}

impl FromStr for Identification {
    type Err = Error;

    /// Inverse of the `Display` form.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "unknown" {
            return Ok(Identification::Unknown);
        }
        if let Some(inner) = s.strip_prefix("ambiguous(").and_then(|r| r.strip_suffix(')')) {
            let ks = inner.split('|').map(str::parse).collect::<Result<Vec<KnotType>>>()?;
            return Ok(Identification::Ambiguous(ks));
        }
        Ok(Identification::Identified(s.parse()?))
    }
}

#[derive(Clone, Debug)]
pub struct KnotRecord {
    pub knot: KnotType,
    pub chiral: bool,
    pub det: u64,
    pub signature: i32,
    pub qa: bool,
    pub homfly: LaurentPoly2,
    /// Kauffman polynomial, kept for types whose HOMFLY polynomial is shared.
    pub kauffman: Option<LaurentPoly2>,
    pub pd: KnotDiagram,
    /// Strand count and word of a braid whose closure is this knot.
    pub braid: Option<(usize, Vec<i32>)>,
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    name: String,
    crossing_number: u32,
    chiral: bool,
    det: u64,
    signature: i32,
    qa: bool,
    homfly: String,
}

#[derive(Clone, Debug)]
pub struct KnotTable {
    records: Vec<KnotRecord>,
    by_name: FxHashMap<String, usize>,
    by_homfly: FxHashMap<LaurentPoly2, Vec<usize>>,
}

fn name_lines(text: &str) -> impl Iterator<Item = (usize, &str, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            return None;
        }
        l.split_once(':').map(|(n, r)| (i + 1, n.trim(), r.trim()))
    })
}

impl KnotTable {
    /// The table shipped with the crate.
    pub fn bundled() -> Result<Self> {
        Self::from_sources(KNOTS_CSV, KNOTS_PD, BRAIDS)
    }

    /// Builds a table from CSV, PD and braid text. Empty HOMFLY cells are
    /// computed from the PD code.
    pub fn from_sources(csv_text: &str, pd_text: &str, braid_text: &str) -> Result<Self> {
        let mut pds: FxHashMap<String, KnotDiagram> = FxHashMap::default();
        for (line, name, pd) in name_lines(pd_text) {
            let d = KnotDiagram::from_pd_str(pd).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            pds.insert(name.to_string(), d);
        }
        let mut braids: FxHashMap<String, (usize, Vec<i32>)> = FxHashMap::default();
        for (line, name, rest) in name_lines(braid_text) {
            let bad = |msg: &str| Error::Parse { line, msg: msg.to_string() };
            let (n, word) = rest.split_once(':').ok_or_else(|| bad("expected `strands: word`"))?;
            let n: usize = n.trim().parse().map_err(|_| bad("bad strand count"))?;
            let word = word
                .split_whitespace()
                .map(|t| t.parse::<i32>().map_err(|_| bad("bad braid letter")))
                .collect::<Result<Vec<_>>>()?;
            braids.insert(name.to_string(), (n, word));
        }

        let mut engine = HomflyEngine::default();
        let mut records = Vec::new();
        let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
        for (i, row) in reader.deserialize::<CsvRow>().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            let knot: KnotType = row.name.parse()?;
            if knot.crossing_number != row.crossing_number {
                return Err(Error::Parse { line, msg: format!("crossing number of {}", row.name) });
            }
            let pd = if knot.is_unknot() {
                KnotDiagram::unknot()
            } else {
                pds.get(&row.name)
                    .cloned()
                    .ok_or_else(|| Error::Parse { line, msg: format!("no PD code for {}", row.name) })?
            };
            let homfly = if row.homfly.trim().is_empty() {
                engine.homfly(&pd)?
            } else {
                row.homfly.parse().map_err(|e: Error| Error::Parse { line, msg: e.to_string() })?
            };
            records.push(KnotRecord {
                braid: braids.get(&row.name).cloned(),
                knot,
                chiral: row.chiral,
                det: row.det,
                signature: row.signature,
                qa: row.qa,
                homfly,
                kauffman: None,
                pd,
            });
        }
        let mut by_name = FxHashMap::default();
        let mut by_homfly: FxHashMap<LaurentPoly2, Vec<usize>> = FxHashMap::default();
        for (i, r) in records.iter().enumerate() {
            by_name.insert(r.knot.to_string(), i);
            by_homfly.entry(r.homfly.clone()).or_default().push(i);
        }
        let mut kauffman = KauffmanEngine::new(DEFAULT_MAX_CROSSINGS);
        for group in by_homfly.values().filter(|g| g.len() > 1) {
            for &i in group {
                records[i].kauffman = Some(kauffman.kauffman(&records[i].pd)?);
            }
        }
        Ok(KnotTable { records, by_name, by_homfly })
    }

    pub fn records(&self) -> &[KnotRecord] {
        &self.records
    }

    /// Records of the prime knots up to eight crossings and their mirrors.
    pub fn primary(&self) -> impl Iterator<Item = &KnotRecord> {
        self.records.iter().filter(|r| r.knot.crossing_number <= 8)
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.by_name.get(name.trim()).map(|&i| &self.records[i])
    }

    pub fn record(&self, k: &KnotType) -> Result<&KnotRecord> {
        self.get(&k.to_string()).ok_or_else(|| Error::UnknownKnot(k.to_string()))
    }

    /// Mirror of a tabulated type (itself when achiral).
    pub fn mirror_of(&self, k: &KnotType) -> Result<KnotType> {
        let r = self.record(k)?;
        Ok(r.knot.mirrored(r.chiral))
    }

    /// A lattice conformation of `k`: a bundled minimal one when available
    /// (mirrored for starred types), otherwise the braid closure.
    pub fn reference_conformation(&self, k: &KnotType) -> Result<LatticePolygon> {
        if k.is_unknot() {
            return Ok(LatticePolygon::unit_square());
        }
        let r = self.record(k)?;
        if let Some((_, text)) = MINIMAL.iter().find(|(n, _)| *n == k.name) {
            let poly = read_polygons(text)?.remove(0);
            return Ok(if k.mirror { poly.mirrored() } else { poly });
        }
        let (n, word) = r.braid.as_ref().ok_or_else(|| Error::UnknownKnot(format!("no conformation for {k}")))?;
        from_braid(*n, word)
    }

    pub fn identify(&self, p: &LaurentPoly2) -> Identification {
        match self.by_homfly.get(p).map(Vec::as_slice) {
            None | Some([]) => Identification::Unknown,
            Some([i]) => Identification::Identified(self.records[*i].knot.clone()),
            Some(many) => {
                let mut ks: Vec<KnotType> = many.iter().map(|&i| self.records[i].knot.clone()).collect();
                ks.sort_by(|a, b| (a.crossing_number, &a.name, a.mirror).cmp(&(b.crossing_number, &b.name, b.mirror)));
                Identification::Ambiguous(ks)
            }
        }
    }

    /// Candidates of an ambiguous lookup whose Kauffman polynomial is `f`.
    pub fn resolve(&self, candidates: &[KnotType], f: &LaurentPoly2) -> Identification {
        let mut left: Vec<KnotType> = candidates
            .iter()
            .filter(|k| self.record(k).ok().and_then(|r| r.kauffman.as_ref()).is_none_or(|g| g == f))
            .cloned()
            .collect();
        match left.len() {
            0 => Identification::Unknown,
            1 => Identification::Identified(left.remove(0)),
            _ => Identification::Ambiguous(left),
        }
    }

    /// CSV text of the table with every HOMFLY cell filled.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,crossing_number,chiral,det,signature,qa,homfly\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.knot, r.knot.crossing_number, r.chiral, r.det, r.signature, r.qa, r.homfly
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knot_type_text() {
        let k: KnotType = "8_20*".parse().unwrap();
        assert_eq!(k.name, "8_20");
        assert!(k.mirror);
        assert_eq!(k.crossing_number, 8);
        assert_eq!(k.to_string(), "8_20*");
        assert!("bogus".parse::<KnotType>().is_err());
        for text in ["unknown", "5_1*", "ambiguous(8_8|10_129)"] {
            assert_eq!(text.parse::<Identification>().unwrap().to_string(), text);
        }
    }

    #[test]
    fn bundled_table_shape() {
        let t = KnotTable::bundled().unwrap();
        // 28 chiral pairs, 7 achiral knots and the unknot
        assert_eq!(t.primary().count(), 64);
        assert_eq!(t.primary().filter(|r| !r.chiral && !r.knot.is_unknot()).count(), 7);
        assert_eq!(t.identify(&LaurentPoly2::one()), Identification::Identified(KnotType::unknot()));
    }

    #[test]
    fn chiral_pairs_are_distinguished() {
        let t = KnotTable::bundled().unwrap();
        for r in t.primary().filter(|r| r.chiral) {
            assert_ne!(r.homfly, r.homfly.mirror(), "{}", r.knot);
        }
        let k817 = t.get("8_17").unwrap();
        assert!(!k817.chiral);
        assert_eq!(k817.homfly, k817.homfly.mirror());
    }

    #[test]
    fn ambiguous_pairs() {
        let t = KnotTable::bundled().unwrap();
        let id = t.identify(&t.get("8_8").unwrap().homfly);
        let Identification::Ambiguous(ks) = id else { panic!("8_8 should be ambiguous") };
        assert_eq!(ks[0].to_string(), "8_8");
        assert_eq!(ks[1].name, "10_129");
        let id = t.identify(&t.get("5_1*").unwrap().homfly);
        let Identification::Ambiguous(ks) = id else { panic!("5_1* should be ambiguous") };
        assert_eq!(ks[0].to_string(), "5_1*");
        assert_eq!(ks[1].name, "10_132");
        assert_eq!(t.identify(&LaurentPoly2::monomial(7, 3, 3)), Identification::Unknown);
        // the Kauffman polynomial separates each pair
        for name in ["8_8", "8_8*", "5_1", "5_1*", "10_129", "10_132*"] {
            let r = t.get(name).unwrap();
            let Identification::Ambiguous(ks) = t.identify(&r.homfly) else { panic!("{name}") };
            assert_eq!(t.resolve(&ks, r.kauffman.as_ref().unwrap()), Identification::Identified(r.knot.clone()));
        }
    }

    #[test]
    fn minimal_conformations() {
        let t = KnotTable::bundled().unwrap();
        for (name, len) in [("3_1", 24), ("4_1", 30), ("5_1", 34), ("5_1*", 34)] {
            let p = t.reference_conformation(&name.parse().unwrap()).unwrap();
            assert_eq!(p.len(), len);
        }
    }

    #[test]
    fn eight_twenty_and_mirror() {
        let t = KnotTable::bundled().unwrap();
        let p = &t.get("8_20").unwrap().homfly;
        assert_eq!(t.identify(p).to_string(), "8_20");
        assert_eq!(t.identify(&p.mirror()).to_string(), "8_20*");
    }
}
