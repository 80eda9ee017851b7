//! Self-avoiding polygons in the simple cubic lattice.
//!
//! A [`LatticePolygon`] is an ordered closed loop of integer points, each
//! consecutive pair (cyclically) one unit step apart along a coordinate axis,
//! with no point repeated. The closure edge from the last vertex back to the
//! first is implicit.

mod braid;
mod io;

pub use braid::from_braid;
pub use io::{
    read_polygons, read_polygons_file, read_samples, read_vertex_loops, write_polygons, write_samples, Sample,
};

use std::fmt;
use std::ops::{Add, Neg, Sub};

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer lattice point.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Point(pub [i32; 3]);

impl Point {
    pub const ORIGIN: Point = Point([0, 0, 0]);

    #[inline]
    pub const fn new(x: i32, y: i32, z: i32) -> Point {
        Point([x, y, z])
    }

    #[inline]
    pub fn x(self) -> i32 {
        self.0[0]
    }

    #[inline]
    pub fn y(self) -> i32 {
        self.0[1]
    }

    #[inline]
    pub fn z(self) -> i32 {
        self.0[2]
    }

    /// L1 norm.
    #[inline]
    pub fn l1(self) -> i32 {
        self.0[0].abs() + self.0[1].abs() + self.0[2].abs()
    }

    #[inline]
    pub fn dot(self, o: Point) -> i64 {
        self.0[0] as i64 * o.0[0] as i64 + self.0[1] as i64 * o.0[1] as i64 + self.0[2] as i64 * o.0[2] as i64
    }

    /// True when `self` is a signed unit coordinate vector.
    #[inline]
    pub fn is_unit(self) -> bool {
        self.l1() == 1
    }

    /// Packs the point into a 64-bit key (21 bits per coordinate).
    #[inline]
    pub fn key(self) -> u64 {
        const OFF: i64 = 1 << 20;
        const MASK: u64 = (1 << 21) - 1;
        let f = |c: i32| ((c as i64 + OFF) as u64) & MASK;
        (f(self.0[0]) << 42) | (f(self.0[1]) << 21) | f(self.0[2])
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

/// The six unit steps, in the order +x, -x, +y, -y, +z, -z.
pub const UNIT_STEPS: [Point; 6] = [
    Point::new(1, 0, 0),
    Point::new(-1, 0, 0),
    Point::new(0, 1, 0),
    Point::new(0, -1, 0),
    Point::new(0, 0, 1),
    Point::new(0, 0, -1),
];

/// The four unit steps perpendicular to the unit step `e`.
pub fn perpendicular_steps(e: Point) -> [Point; 4] {
    let mut out = [Point::ORIGIN; 4];
    let mut k = 0;
    for d in UNIT_STEPS {
        if d.dot(e) == 0 {
            out[k] = d;
            k += 1;
        }
    }
    debug_assert_eq!(k, 4);
    out
}

/// A polygon edge running from vertex `index` to vertex `index + 1 (mod n)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DirectedEdge {
    pub tail: Point,
    pub head: Point,
    pub index: usize,
}

impl DirectedEdge {
    pub fn direction(&self) -> Point {
        self.head - self.tail
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Fewer than four vertices.
    TooShort,
    /// Odd number of edges; impossible for a closed lattice loop.
    OddLength,
    /// Step from this vertex to the next is not a unit coordinate step.
    UnitStep,
    /// This vertex repeats an earlier one.
    SelfAvoidance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<(Rule, usize)>,
}

/// Checks closure, unit steps, self-avoidance and length of a vertex loop.
pub fn validate_vertices(vertices: &[Point]) -> ValidationReport {
    let n = vertices.len();
    let mut violations = Vec::new();
    if n < 4 {
        violations.push((Rule::TooShort, 0));
    }
    if n % 2 == 1 {
        violations.push((Rule::OddLength, 0));
    }
    if n >= 2 {
        for i in 0..n {
            let step = vertices[(i + 1) % n] - vertices[i];
            if !step.is_unit() {
                violations.push((Rule::UnitStep, i));
            }
        }
    }
    let mut seen = FxHashSet::default();
    for (i, v) in vertices.iter().enumerate() {
        if !seen.insert(*v) {
            violations.push((Rule::SelfAvoidance, i));
        }
    }
    ValidationReport { valid: violations.is_empty(), violations }
}

/// Closed self-avoiding lattice polygon.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePolygon {
    vertices: Vec<Point>,
}

impl fmt::Debug for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticePolygon(n={}, {:?})", self.vertices.len(), self.vertices)
    }
}

impl LatticePolygon {
    /// Builds a polygon, rejecting any invariant violation.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let report = validate_vertices(&vertices);
        if !report.valid {
            return Err(Error::InvalidPolygon(format!("{:?}", report.violations)));
        }
        Ok(LatticePolygon { vertices })
    }

    /// Wraps a vertex loop without validating it. Callers must uphold the invariants.
    pub fn from_vertices_unchecked(vertices: Vec<Point>) -> Self {
        debug_assert!(validate_vertices(&vertices).valid);
        LatticePolygon { vertices }
    }

    pub fn unit_square() -> Self {
        LatticePolygon {
            vertices: vec![Point::new(0, 0, 0), Point::new(1, 0, 0), Point::new(1, 1, 0), Point::new(0, 1, 0)],
        }
    }

    /// Axis-aligned `w x h` rectangle in the xy-plane, traversed counterclockwise from the origin.
    pub fn rectangle(w: i32, h: i32) -> Result<Self> {
        if w < 1 || h < 1 {
            return Err(Error::InvalidParameter(format!("rectangle {w}x{h}")));
        }
        let mut v = Vec::new();
        for x in 0..w {
            v.push(Point::new(x, 0, 0));
        }
        for y in 0..h {
            v.push(Point::new(w, y, 0));
        }
        for x in (1..=w).rev() {
            v.push(Point::new(x, h, 0));
        }
        for y in (1..=h).rev() {
            v.push(Point::new(0, y, 0));
        }
        Self::new(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    pub fn validate(&self) -> ValidationReport {
        validate_vertices(&self.vertices)
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1 (mod n)`.
    pub fn edges(&self) -> Vec<DirectedEdge> {
        let n = self.vertices.len();
        (0..n).map(|i| DirectedEdge { tail: self.vertices[i], head: self.vertices[(i + 1) % n], index: i }).collect()
    }

    /// Undirected edge list, suitable for [`component_count`].
    pub fn edge_set(&self) -> Vec<(Point, Point)> {
        self.edges().into_iter().map(|e| (e.tail, e.head)).collect()
    }

    /// Map from vertex to its index along the traversal.
    pub fn index_map(&self) -> FxHashMap<Point, usize> {
        self.vertices.iter().enumerate().map(|(i, p)| (*p, i)).collect()
    }

    pub fn translated(&self, by: Point) -> Self {
        LatticePolygon { vertices: self.vertices.iter().map(|p| *p + by).collect() }
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        LatticePolygon { vertices: v }
    }

    /// Reflection through the xy-plane (z -> -z); represents the mirror image.
    pub fn mirrored(&self) -> Self {
        LatticePolygon { vertices: self.vertices.iter().map(|p| Point::new(p.x(), p.y(), -p.z())).collect() }
    }

    /// Translation- and traversal-invariant normal form.
    ///
    /// The lexicographically smallest vertex becomes the origin and the first
    /// vertex; of the two traversal directions the one whose second vertex is
    /// lexicographically smaller is kept.
    pub fn canonicalize(&self) -> Self {
        let n = self.vertices.len();
        if n == 0 {
            return self.clone();
        }
        let (m, min) = self.vertices.iter().enumerate().min_by_key(|(_, p)| **p).map(|(i, p)| (i, *p)).unwrap();
        let fwd = self.vertices[(m + 1) % n];
        let back = self.vertices[(m + n - 1) % n];
        let forward = fwd <= back;
        let vertices = (0..n)
            .map(|k| {
                let idx = if forward { (m + k) % n } else { (m + n - k) % n };
                self.vertices[idx] - min
            })
            .collect();
        LatticePolygon { vertices }
    }

    /// Equality of canonical forms.
    pub fn same_conformation(&self, other: &Self) -> bool {
        self.len() == other.len() && self.canonicalize() == other.canonicalize()
    }
}

/// Number of connected closed components of an undirected unit-edge multiset.
///
/// Every vertex must have even degree.
pub fn component_count(edges: &[(Point, Point)]) -> Result<usize> {
    let mut ids: FxHashMap<Point, usize> = FxHashMap::default();
    let mut points: Vec<Point> = Vec::new();
    let mut degree: Vec<usize> = Vec::new();
    let mut parent: Vec<usize> = Vec::new();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for &(a, b) in edges {
        let mut ends = [0usize; 2];
        for (slot, q) in [a, b].into_iter().enumerate() {
            let i = *ids.entry(q).or_insert_with(|| {
                points.push(q);
                degree.push(0);
                parent.push(parent.len());
                points.len() - 1
            });
            degree[i] += 1;
            ends[slot] = i;
        }
        let (ra, rb) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    if let Some(i) = degree.iter().position(|d| d % 2 == 1) {
        return Err(Error::OddDegree(points[i].0));
    }
    let roots: FxHashSet<usize> = (0..parent.len()).map(|i| find(&mut parent, i)).collect();
    Ok(roots.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i32, y: i32, z: i32) -> Point {
        Point::new(x, y, z)
    }

    #[test]
    fn unit_square_is_valid() {
        let sq = LatticePolygon::unit_square();
        assert!(sq.validate().valid);
        assert_eq!(sq.len(), 4);
    }

    #[test]
    fn repeated_vertex_is_reported() {
        let v = vec![p(0, 0, 0), p(1, 0, 0), p(1, 1, 0), p(0, 1, 0), p(0, 0, 0), p(0, 1, 0)];
        let r = validate_vertices(&v);
        assert!(!r.valid);
        assert!(r.violations.iter().any(|(rule, _)| *rule == Rule::SelfAvoidance));
    }

    #[test]
    fn long_step_is_reported() {
        let v = vec![p(0, 0, 0), p(2, 0, 0), p(2, 1, 0), p(0, 1, 0)];
        let r = validate_vertices(&v);
        assert!(r.violations.contains(&(Rule::UnitStep, 0)));
        assert!(r.violations.contains(&(Rule::UnitStep, 2)));
        assert!(LatticePolygon::new(v).is_err());
    }

    #[test]
    fn short_and_odd_loops_are_rejected() {
        let r = validate_vertices(&[p(0, 0, 0), p(1, 0, 0)]);
        assert!(r.violations.contains(&(Rule::TooShort, 0)));
        let r = validate_vertices(&[p(0, 0, 0), p(1, 0, 0), p(1, 1, 0)]);
        assert!(r.violations.contains(&(Rule::OddLength, 0)));
    }

    #[test]
    fn square_edges() {
        let e = LatticePolygon::unit_square().edges();
        let dirs: Vec<Point> = e.iter().map(|e| e.direction()).collect();
        assert_eq!(dirs, vec![p(1, 0, 0), p(0, 1, 0), p(-1, 0, 0), p(0, -1, 0)]);
        assert_eq!(e[3].head, e[0].tail);
    }

    #[test]
    fn hexagon_edges_close() {
        let hex = LatticePolygon::rectangle(2, 1).unwrap();
        let e = hex.edges();
        assert_eq!(e.len(), 6);
        let sum = e.iter().fold(Point::ORIGIN, |acc, e| acc + e.direction());
        assert_eq!(sum, Point::ORIGIN);
    }

    #[test]
    fn component_counts() {
        let sq = LatticePolygon::unit_square();
        assert_eq!(component_count(&sq.edge_set()).unwrap(), 1);
        let mut two = sq.edge_set();
        two.extend(sq.translated(p(5, 0, 0)).edge_set());
        assert_eq!(component_count(&two).unwrap(), 2);
        let open = vec![(p(0, 0, 0), p(1, 0, 0))];
        assert!(matches!(component_count(&open), Err(Error::OddDegree(_))));
    }

    #[test]
    fn canonical_form() {
        let sq = LatticePolygon::unit_square();
        assert_eq!(sq.translated(p(5, 5, 5)).canonicalize(), sq.canonicalize());
        let c = sq.canonicalize();
        assert_eq!(c.canonicalize(), c);
        assert_eq!(c.reversed().canonicalize(), c);
        assert_eq!(c.vertices()[0], Point::ORIGIN);
    }

    #[test]
    fn reversed_traversal_canonicalizes_identically() {
        // enumerate every rotation and both directions of a hexagon
        let hex = LatticePolygon::rectangle(2, 1).unwrap();
        let c = hex.canonicalize();
        let n = hex.len();
        for start in 0..n {
            let mut v: Vec<Point> = (0..n).map(|k| hex.vertices()[(start + k) % n]).collect();
            assert_eq!(LatticePolygon::new(v.clone()).unwrap().canonicalize(), c);
            v.reverse();
            assert_eq!(LatticePolygon::new(v).unwrap().canonicalize(), c);
        }
    }

    #[test]
    fn point_keys_are_distinct() {
        let mut keys = FxHashSet::default();
        for x in -3..3 {
            for y in -3..3 {
                for z in -3..3 {
                    assert!(keys.insert(p(x, y, z).key()));
                }
            }
        }
    }
}
