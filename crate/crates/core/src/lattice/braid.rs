//! Lattice embeddings of braid closures.
//!
//! Strand slot `s` runs along the line `x = 2s, z = 0` in the +y direction.
//! Each braid letter occupies four units of y; the over strand of a crossing is
//! lifted to `z = 1`. The closure arcs return in the planes `x = 2s` at
//! `z = -1`, below every crossing, so they form a trivial tangle.

use super::{LatticePolygon, Point};
use crate::error::{Error, Result};

const BLOCK: i32 = 4;

/// Closure of the braid `word` on `n_strands` strands as a lattice polygon.
///
/// Letter `k > 0` is the positive crossing between slots `k-1` and `k`,
/// `-k` its inverse. The permutation of the braid must be a single cycle.
pub fn from_braid(n_strands: usize, word: &[i32]) -> Result<LatticePolygon> {
    if n_strands == 0 {
        return Err(Error::InvalidParameter("braid needs at least one strand".into()));
    }
    for &g in word {
        if g == 0 || g.unsigned_abs() as usize >= n_strands {
            return Err(Error::InvalidParameter(format!("braid letter {g} on {n_strands} strands")));
        }
    }
    let blocks: Vec<i32> = if word.is_empty() { vec![0] } else { word.to_vec() };
    let height = BLOCK * blocks.len() as i32;

    // segment[b][s]: points traversed by the strand entering block b in slot s
    // (block start excluded, block end included) and the slot it leaves in.
    let mut segments: Vec<Vec<(Vec<Point>, usize)>> = Vec::with_capacity(blocks.len());
    for (b, &g) in blocks.iter().enumerate() {
        let y0 = BLOCK * b as i32;
        let mut row: Vec<(Vec<Point>, usize)> = (0..n_strands)
            .map(|s| {
                let x = 2 * s as i32;
                ((1..=BLOCK).map(|dy| Point::new(x, y0 + dy, 0)).collect(), s)
            })
            .collect();
        if g != 0 {
            let k = g.unsigned_abs() as usize - 1;
            let (left, right) = (2 * k as i32, 2 * k as i32 + 2);
            let mid = left + 1;
            let lifted = |from: i32, to: i32| -> Vec<Point> {
                vec![
                    Point::new(from, y0 + 1, 0),
                    Point::new(from, y0 + 1, 1),
                    Point::new(from, y0 + 2, 1),
                    Point::new(mid, y0 + 2, 1),
                    Point::new(to, y0 + 2, 1),
                    Point::new(to, y0 + 3, 1),
                    Point::new(to, y0 + 3, 0),
                    Point::new(to, y0 + 4, 0),
                ]
            };
            let flat = |from: i32, to: i32| -> Vec<Point> {
                vec![
                    Point::new(from, y0 + 1, 0),
                    Point::new(from, y0 + 2, 0),
                    Point::new(mid, y0 + 2, 0),
                    Point::new(to, y0 + 2, 0),
                    Point::new(to, y0 + 3, 0),
                    Point::new(to, y0 + 4, 0),
                ]
            };
            // strands point along +y; a positive crossing has the over strand
            // running from the left slot to the right one
            if g > 0 {
                row[k] = (lifted(left, right), k + 1);
                row[k + 1] = (flat(right, left), k);
            } else {
                row[k] = (flat(left, right), k + 1);
                row[k + 1] = (lifted(right, left), k);
            }
        }
        segments.push(row);
    }

    let mut vertices = Vec::new();
    let mut slot = 0usize;
    let mut visited_starts = 0usize;
    loop {
        vertices.push(Point::new(2 * slot as i32, 0, 0));
        visited_starts += 1;
        for row in &segments {
            let (pts, next) = &row[slot];
            vertices.extend_from_slice(pts);
            slot = *next;
        }
        let x = 2 * slot as i32;
        for y in (0..=height).rev() {
            vertices.push(Point::new(x, y, -1));
        }
        if slot == 0 {
            break;
        }
        if visited_starts > n_strands {
            break;
        }
    }
    if visited_starts != n_strands {
        return Err(Error::InvalidParameter(format!(
            "braid closure has more than one component ({visited_starts} of {n_strands} strands reached)"
        )));
    }
    LatticePolygon::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_braid_is_a_valid_loop() {
        let p = from_braid(1, &[]).unwrap();
        assert!(p.validate().valid);
    }

    #[test]
    fn trefoil_braid_is_valid() {
        let p = from_braid(2, &[1, 1, 1]).unwrap();
        assert!(p.validate().valid);
        assert_eq!(p.len() % 2, 0);
    }

    #[test]
    fn link_braid_is_rejected() {
        assert!(from_braid(2, &[1, 1]).is_err());
        assert!(from_braid(3, &[1]).is_err());
        assert!(from_braid(2, &[2]).is_err());
    }
}
