//! Reconnection sites and band surgery on lattice polygons.
//!
//! A site is a unit square two of whose opposite sides are polygon edges while
//! the other two sides are not. When the two edges point the same way the
//! band move keeps one component (non-coherent); when they point opposite
//! ways it splits the polygon in two (coherent).

pub mod survey;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{component_count, perpendicular_steps, LatticePolygon, Point};

pub use survey::{
    read_transitions, reconnect_survey, transitions_csv, write_transitions, SitePolicy, Surveyor, TransitionRecord,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReconnectionSite {
    /// Edge `edge_a` runs from vertex `edge_a` to `edge_a + 1`; `edge_a < edge_b`.
    pub edge_a: usize,
    pub edge_b: usize,
    /// Corners in cyclic order, starting with the tail of `edge_a`.
    pub square: [Point; 4],
    pub parallel: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandKind {
    Coherent,
    NonCoherent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandMoveResult {
    pub polygon_after: LatticePolygon,
    pub components_after: usize,
    pub site: ReconnectionSite,
}

pub fn classify(site: &ReconnectionSite) -> BandKind {
    if site.parallel {
        BandKind::NonCoherent
    } else {
        BandKind::Coherent
    }
}

/// All reconnection sites, each square once.
pub fn find_sites(poly: &LatticePolygon) -> Vec<ReconnectionSite> {
    let v = poly.vertices();
    let index: FxHashMap<u64, usize> = v.iter().enumerate().map(|(i, p)| (p.key(), i)).collect();
    find_sites_indexed(v, &index)
}

/// As [`find_sites`], with a prebuilt map from point key to vertex index.
pub fn find_sites_indexed(v: &[Point], index: &FxHashMap<u64, usize>) -> Vec<ReconnectionSite> {
    let n = v.len();
    let succ = |i: usize| if i + 1 == n { 0 } else { i + 1 };
    let adjacent = |i: usize, j: usize| succ(i) == j || succ(j) == i;
    let mut sites = Vec::new();
    for i in 0..n {
        let (u, w) = (v[i], v[succ(i)]);
        for d in perpendicular_steps(w - u) {
            let (Some(&k), Some(&l)) = (index.get(&(u + d).key()), index.get(&(w + d).key())) else {
                continue;
            };
            let (j, parallel) = if succ(k) == l {
                (k, true)
            } else if succ(l) == k {
                (l, false)
            } else {
                continue;
            };
            if j <= i || adjacent(i, k) || adjacent(succ(i), l) {
                continue;
            }
            sites.push(ReconnectionSite { edge_a: i, edge_b: j, square: [u, w, w + d, u + d], parallel });
        }
    }
    sites
}

/// Non-coherent sites only.
pub fn find_noncoherent_sites(poly: &LatticePolygon) -> Vec<ReconnectionSite> {
    find_sites(poly).into_iter().filter(|s| s.parallel).collect()
}

fn check_site(v: &[Point], site: &ReconnectionSite) -> Result<()> {
    let n = v.len();
    let (i, j) = (site.edge_a, site.edge_b);
    if i >= j || j >= n {
        return Err(Error::StaleSite(format!("edge indices {i}, {j} on {n} vertices")));
    }
    let [u, w, w2, u2] = site.square;
    let ok = if site.parallel {
        v[i] == u && v[i + 1] == w && v[j] == u2 && v[(j + 1) % n] == w2
    } else {
        v[i] == u && v[i + 1] == w && v[j] == w2 && v[(j + 1) % n] == u2
    };
    if !ok {
        return Err(Error::StaleSite(format!("edges {i}, {j} do not match the site square")));
    }
    Ok(())
}

/// Edge set after replacing the two site edges by the connecting sides.
pub fn banded_edges(poly: &LatticePolygon, site: &ReconnectionSite) -> Vec<(Point, Point)> {
    let [u, w, w2, u2] = site.square;
    let mut edges: Vec<(Point, Point)> = poly
        .edges()
        .into_iter()
        .filter(|e| e.index != site.edge_a && e.index != site.edge_b)
        .map(|e| (e.tail, e.head))
        .collect();
    edges.push((u, u2));
    edges.push((w, w2));
    edges
}

/// Number of components after the band move at `site`.
pub fn components_after(poly: &LatticePolygon, site: &ReconnectionSite) -> Result<usize> {
    component_count(&banded_edges(poly, site))
}

/// Applies a non-coherent band move: the arc between the two site edges is
/// traversed in reverse.
pub fn apply_band(poly: &LatticePolygon, site: &ReconnectionSite) -> Result<BandMoveResult> {
    let v = poly.vertices();
    check_site(v, site)?;
    if !site.parallel {
        return Err(Error::CoherentSite);
    }
    let mut out = v.to_vec();
    out[site.edge_a + 1..=site.edge_b].reverse();
    let after = LatticePolygon::from_vertices_unchecked(out);
    debug_assert!(after.validate().valid);
    let [u, _, w2, _] = site.square;
    // the same square, now bounded by the former connecting sides
    let new_site = ReconnectionSite {
        edge_a: site.edge_a,
        edge_b: site.edge_b,
        square: [u, site.square[3], w2, site.square[1]],
        parallel: true,
    };
    Ok(BandMoveResult { polygon_after: after, components_after: 1, site: new_site })
}

/// Vertices after a non-coherent band move, without validation.
pub fn banded_vertices(v: &[Point], edge_a: usize, edge_b: usize) -> Vec<Point> {
    let mut out = v.to_vec();
    out[edge_a + 1..=edge_b].reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_has_no_sites() {
        assert!(find_sites(&LatticePolygon::unit_square()).is_empty());
    }

    #[test]
    fn long_rectangle_sites() {
        // 3x1: the long sides face each other across unit squares
        let r = LatticePolygon::rectangle(3, 1).unwrap();
        let sites = find_sites(&r);
        assert!(!sites.is_empty());
        for s in &sites {
            assert!(!s.parallel, "a simple rectangle only has antiparallel pairs");
            assert_eq!(components_after(&r, s).unwrap(), 2);
            assert!(matches!(apply_band(&r, s), Err(Error::CoherentSite)));
        }
    }

    #[test]
    fn parallel_site_is_an_involution() {
        // a hairpin with two parallel edges across a free square
        let pts = [
            (0, 0, 0),
            (1, 0, 0),
            (1, 0, 1),
            (1, 1, 1),
            (0, 1, 1),
            (0, 1, 0),
            (1, 1, 0),
            (2, 1, 0),
            (2, 1, -1),
            (2, 0, -1),
            (1, 0, -1),
            (0, 0, -1),
        ];
        let poly = LatticePolygon::new(pts.iter().map(|&(x, y, z)| Point::new(x, y, z)).collect()).unwrap();
        let sites = find_sites(&poly);
        let site = sites.iter().find(|s| s.parallel).expect("a parallel site");
        assert_eq!(components_after(&poly, site).unwrap(), 1);
        let once = apply_band(&poly, site).unwrap();
        assert!(once.polygon_after.validate().valid);
        assert_eq!(once.polygon_after.len(), poly.len());
        assert!(find_sites(&once.polygon_after).contains(&once.site));
        let twice = apply_band(&once.polygon_after, &once.site).unwrap();
        assert_eq!(twice.polygon_after, poly);
    }

    #[test]
    fn stale_sites_are_rejected() {
        let r = LatticePolygon::rectangle(3, 1).unwrap();
        let mut s = find_sites(&r)[0];
        s.edge_b = 99;
        assert!(matches!(apply_band(&r, &s), Err(Error::StaleSite(_))));
    }
}
