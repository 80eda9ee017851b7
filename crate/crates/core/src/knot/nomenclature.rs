//! Mirror conventions of other knot tables. Only the knots whose convention
//! is charted are converted; achiral knots need no conversion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::table::KnotType;
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Nomenclature {
    /// Unstarred chiral knots have negative signature.
    #[default]
    Native,
    Rolfsen,
    KnotPlot,
}

/// Knots named oppositely by the Rolfsen table.
const ROLFSEN_FLIPPED: [&str; 6] = ["3_1", "5_1", "5_2", "6_2", "7_1", "8_20"];
const ROLFSEN_SAME: [&str; 2] = ["8_8", "8_19"];

impl Nomenclature {
    /// Whether this table's name for `name` is the mirror of the native one;
    /// `None` when not charted.
    fn flipped(self, name: &str) -> Option<bool> {
        let rolfsen = if ROLFSEN_FLIPPED.contains(&name) {
            true
        } else if ROLFSEN_SAME.contains(&name) {
            false
        } else {
            return None;
        };
        match self {
            Nomenclature::Native => Some(false),
            Nomenclature::Rolfsen => Some(rolfsen),
            // KnotPlot agrees with Rolfsen except on the charted knots
            Nomenclature::KnotPlot => Some(!rolfsen),
        }
    }

    /// Renames `k`, given in `from`, to this nomenclature.
    pub fn convert(self, k: &KnotType, chiral: bool, from: Nomenclature) -> Result<KnotType> {
        if !chiral || self == from {
            return Ok(k.clone());
        }
        match (from.flipped(&k.name), self.flipped(&k.name)) {
            (Some(a), Some(b)) => Ok(KnotType { mirror: k.mirror ^ a ^ b, ..k.clone() }),
            _ => Err(Error::InvalidParameter(format!("no {self} name recorded for {k} ({from})"))),
        }
    }
}

impl fmt::Display for Nomenclature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Nomenclature::Native => "native",
            Nomenclature::Rolfsen => "rolfsen",
            Nomenclature::KnotPlot => "knotplot",
        })
    }
}

impl FromStr for Nomenclature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "native" => Ok(Nomenclature::Native),
            "rolfsen" => Ok(Nomenclature::Rolfsen),
            "knotplot" => Ok(Nomenclature::KnotPlot),
            _ => Err(Error::InvalidParameter(format!("unknown nomenclature `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Nomenclature::*;

    fn k(s: &str) -> KnotType {
        s.parse().unwrap()
    }

    #[test]
    fn chart() {
        // native, Rolfsen, KnotPlot
        let rows = [
            ("3_1", "3_1*", "3_1"),
            ("5_1", "5_1*", "5_1"),
            ("5_2", "5_2*", "5_2"),
            ("6_2", "6_2*", "6_2"),
            ("7_1", "7_1*", "7_1"),
            ("8_8", "8_8", "8_8*"),
            ("8_19", "8_19", "8_19*"),
            ("8_20", "8_20*", "8_20"),
        ];
        for (n, r, p) in rows {
            assert_eq!(Rolfsen.convert(&k(n), true, Native).unwrap(), k(r));
            assert_eq!(KnotPlot.convert(&k(n), true, Native).unwrap(), k(p));
            assert_eq!(Native.convert(&k(r), true, Rolfsen).unwrap(), k(n));
            assert_eq!(KnotPlot.convert(&k(r), true, Rolfsen).unwrap(), k(p));
            let star = k(n).mirrored(true);
            assert_eq!(Native.convert(&Rolfsen.convert(&star, true, Native).unwrap(), true, Rolfsen).unwrap(), star);
        }
    }

    #[test]
    fn uncharted_and_achiral() {
        assert!(Rolfsen.convert(&k("7_4"), true, Native).is_err());
        assert_eq!(Native.convert(&k("7_4"), true, Native).unwrap(), k("7_4"));
        assert_eq!(Rolfsen.convert(&k("4_1"), false, Native).unwrap(), k("4_1"));
        assert_eq!("KnotPlot".parse::<Nomenclature>().unwrap(), KnotPlot);
        assert!("brasher".parse::<Nomenclature>().is_err());
    }
}
