//! Independent oracles for the acceptance suite.

#![allow(dead_code)]

use std::collections::HashSet;

use latband::lattice::{LatticePolygon, Point};

/// Unrooted self-avoiding polygon counts `p_n` for even `n <= max_n`, by
/// depth-first enumeration of closed walks whose first step is `+x`.
pub fn polygon_counts(max_n: usize) -> Vec<(usize, u64)> {
    const STEPS: [[i32; 3]; 6] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];
    // closed[n]: walks 0 -> ... -> 0 of n steps, first step +x
    let mut closed = vec![0u64; max_n + 1];
    let mut visited: HashSet<[i32; 3]> = HashSet::new();
    visited.insert([0, 0, 0]);
    visited.insert([1, 0, 0]);

    fn walk(
        p: [i32; 3],
        len: usize,
        max_n: usize,
        visited: &mut HashSet<[i32; 3]>,
        closed: &mut [u64],
        steps: &[[i32; 3]; 6],
    ) {
        for s in steps {
            let q = [p[0] + s[0], p[1] + s[1], p[2] + s[2]];
            let dist = (q[0].abs() + q[1].abs() + q[2].abs()) as usize;
            if q == [0, 0, 0] {
                if len + 1 >= 4 {
                    closed[len + 1] += 1;
                }
                continue;
            }
            if len + 1 + dist > max_n || visited.contains(&q) {
                continue;
            }
            visited.insert(q);
            walk(q, len + 1, max_n, visited, closed, steps);
            visited.remove(&q);
        }
    }
    walk([1, 0, 0], 1, max_n, &mut visited, &mut closed, &STEPS);
    // 2n rooted oriented copies per polygon, one sixth of them start with +x
    (4..=max_n).step_by(2).map(|n| (n, closed[n] * 6 / (2 * n as u64))).collect()
}

/// Every pair of polygon edges forming opposite sides of a unit square
/// whose other two sides are not polygon edges, as `(i, j, same_direction)`
/// with `i < j`.
pub fn brute_force_sites(poly: &LatticePolygon) -> HashSet<(usize, usize, bool)> {
    let v = poly.vertices();
    let n = v.len();
    let edge = |i: usize| (v[i], v[(i + 1) % n]);
    let mut edges: HashSet<(Point, Point)> = HashSet::new();
    for i in 0..n {
        let (a, b) = edge(i);
        edges.insert((a, b));
        edges.insert((b, a));
    }
    let unit_perp = |d: Point, dir: Point| d.is_unit() && d.dot(dir) == 0;
    let mut out = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = edge(i);
            let (c, e) = edge(j);
            let dir = b - a;
            let (same, d) = if e - c == dir {
                (true, c - a)
            } else if c - e == dir {
                (false, e - a)
            } else {
                continue;
            };
            if !unit_perp(d, dir) {
                continue;
            }
            // the connecting sides a-(a+d) and b-(b+d) must not be edges
            if edges.contains(&(a, a + d)) || edges.contains(&(b, b + d)) {
                continue;
            }
            out.insert((i, j, same));
        }
    }
    out
}
