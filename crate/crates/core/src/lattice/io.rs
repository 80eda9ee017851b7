//! Plain-text polygon files: one `x y z` vertex per line, a blank line between
//! polygons, closure edge implicit. Lines starting with `#` are comments; a
//! sample file prefixes each polygon with `# chain <k> step <t>`.

use std::path::Path;

use super::{LatticePolygon, Point};
use crate::error::{Error, Result};

pub fn write_polygons(polys: &[LatticePolygon]) -> String {
    let mut out = String::new();
    for (k, poly) in polys.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for v in poly.vertices() {
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
    out
}

/// A conformation drawn from chain `chain` after `step` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub polygon: LatticePolygon,
    pub chain: usize,
    pub step: u64,
}

pub fn write_samples(samples: &[Sample]) -> String {
    let mut out = String::new();
    for (k, s) in samples.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        out.push_str(&format!("# chain {} step {}\n", s.chain, s.step));
        for v in s.polygon.vertices() {
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
    out
}

/// Reads a sample file; polygons without a header get chain 0 and their
/// position in the file as step.
pub fn read_samples(text: &str) -> Result<Vec<Sample>> {
    let mut headers: Vec<(usize, u64)> = Vec::new();
    let mut pending: Option<(usize, u64)> = None;
    let mut in_polygon = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            let t: Vec<&str> = rest.split_whitespace().collect();
            if let ["chain", c, "step", s] = t[..] {
                let bad = || Error::Parse { line: lineno + 1, msg: "bad sample header".into() };
                pending = Some((c.parse().map_err(|_| bad())?, s.parse().map_err(|_| bad())?));
            }
        } else if line.is_empty() {
            in_polygon = false;
        } else if !in_polygon {
            in_polygon = true;
            headers.push(pending.take().unwrap_or((0, headers.len() as u64)));
        }
    }
    let polys = read_polygons(text)?;
    Ok(polys.into_iter().zip(headers).map(|(polygon, (chain, step))| Sample { polygon, chain, step }).collect())
}

pub fn read_polygons(text: &str) -> Result<Vec<LatticePolygon>> {
    read_vertex_loops(text)?
        .into_iter()
        .map(|(line, v)| {
            LatticePolygon::new(v).map_err(|e| Error::Parse { line, msg: format!("polygon starting here: {e}") })
        })
        .collect()
}

/// Vertex lists with the line each starts on, without polygon checks.
pub fn read_vertex_loops(text: &str) -> Result<Vec<(usize, Vec<Point>)>> {
    let mut loops = Vec::new();
    let mut current: Vec<Point> = Vec::new();
    let mut start_line = 1;
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !current.is_empty() {
                loops.push((start_line, std::mem::take(&mut current)));
            }
            continue;
        }
        if current.is_empty() {
            start_line = lineno;
        }
        let mut coords = [0i32; 3];
        let mut it = line.split_whitespace();
        for c in coords.iter_mut() {
            let tok = it.next().ok_or_else(|| Error::Parse { line: lineno, msg: "expected three integers".into() })?;
            *c = tok.parse().map_err(|_| Error::Parse { line: lineno, msg: format!("bad integer `{tok}`") })?;
        }
        if it.next().is_some() {
            return Err(Error::Parse { line: lineno, msg: "trailing tokens".into() });
        }
        current.push(Point(coords));
    }
    if !current.is_empty() {
        loops.push((start_line, current));
    }
    Ok(loops)
}

pub fn read_polygons_file(path: impl AsRef<Path>) -> Result<Vec<LatticePolygon>> {
    read_polygons(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_text() {
        let text = write_polygons(&[LatticePolygon::unit_square()]);
        assert_eq!(text, "0 0 0\n1 0 0\n1 1 0\n0 1 0\n");
    }

    #[test]
    fn bad_lines_name_the_line() {
        let err = read_polygons("0 0 0\n1 0 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_polygons("0 0 0\n2 0 0\n2 1 0\n0 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn samples_round_trip() {
        let samples = vec![
            Sample { polygon: LatticePolygon::unit_square(), chain: 2, step: 500 },
            Sample { polygon: LatticePolygon::rectangle(2, 1).unwrap(), chain: 0, step: 1000 },
        ];
        let text = write_samples(&samples);
        assert_eq!(read_samples(&text).unwrap(), samples);
        assert_eq!(read_polygons(&text).unwrap().len(), 2);
        let bare = read_samples(&write_polygons(&[LatticePolygon::unit_square()])).unwrap();
        assert_eq!((bare[0].chain, bare[0].step), (0, 0));
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(ws in proptest::collection::vec((1i32..5, 1i32..5, -50i32..50), 1..5)) {
            let polys: Vec<LatticePolygon> = ws
                .iter()
                .map(|&(w, h, dz)| LatticePolygon::rectangle(w, h).unwrap().translated(Point::new(dz, -dz, dz)))
                .collect();
            let text = write_polygons(&polys);
            let back = read_polygons(&text).unwrap();
            prop_assert_eq!(&back, &polys);
            prop_assert_eq!(write_polygons(&back), text);
        }
    }
}
