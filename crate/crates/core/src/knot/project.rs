//! Regular projections of integer polygons to PD diagrams.
//!
//! The direction `d = (d1, d2, d3)` with `d3 > 0` maps a point to
//! `(d3 x - d1 z, d3 y - d2 z)`, viewed from `+d`; height along `d` decides
//! over and under. All tests are exact.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::diagram::{Crossing, KnotDiagram};
use super::reduce::P3;
use crate::error::{Error, Result};

const DIRECTION_RANGE: i64 = 997;

#[inline]
fn q2(p: P3, d: P3) -> [i64; 2] {
    [d[2] * p[0] - d[0] * p[2], d[2] * p[1] - d[1] * p[2]]
}

#[inline]
fn cross2(a: [i64; 2], b: [i64; 2]) -> i128 {
    a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128
}

#[inline]
fn sub2(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
fn dot3(a: P3, b: P3) -> i128 {
    a[0] as i128 * b[0] as i128 + a[1] as i128 * b[1] as i128 + a[2] as i128 * b[2] as i128
}

fn within(p: [i64; 2], a: [i64; 2], b: [i64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

struct Event {
    /// position along the segment as `num / den`, `den > 0`
    num: i128,
    den: i128,
    crossing: usize,
    over: bool,
}

/// Diagram of the closed polygon seen along `d`, or `None` if the projection
/// is not regular.
pub fn project_along(vertices: &[P3], d: P3) -> Option<KnotDiagram> {
    assert!(d[2] > 0, "projection direction needs a positive z component");
    let m = vertices.len();
    let pts: Vec<[i64; 2]> = vertices.iter().map(|&v| q2(v, d)).collect();
    let seg = |i: usize| (pts[i], pts[(i + 1) % m]);
    for i in 0..m {
        let (a, b) = seg(i);
        if a == b {
            return None;
        }
        // fold-back onto the previous segment
        let c = pts[(i + 2) % m];
        if cross2(sub2(b, a), sub2(c, b)) == 0
            && (c[0] - b[0]) as i128 * (a[0] - b[0]) as i128 + (c[1] - b[1]) as i128 * (a[1] - b[1]) as i128 > 0
        {
            return None;
        }
    }

    let mut events: Vec<Vec<Event>> = (0..m).map(|_| Vec::new()).collect();
    let mut signs = Vec::new();
    let boxes: Vec<([i64; 2], [i64; 2])> = (0..m)
        .map(|i| {
            let (a, b) = seg(i);
            ([a[0].min(b[0]), a[1].min(b[1])], [a[0].max(b[0]), a[1].max(b[1])])
        })
        .collect();
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi.1[0] < bj.0[0] || bj.1[0] < bi.0[0] || bi.1[1] < bj.0[1] || bj.1[1] < bi.0[1] {
                continue;
            }
            let (a, b) = seg(i);
            let (c, e) = seg(j);
            let o1 = cross2(sub2(b, a), sub2(c, a)).signum();
            let o2 = cross2(sub2(b, a), sub2(e, a)).signum();
            let o3 = cross2(sub2(e, c), sub2(a, c)).signum();
            let o4 = cross2(sub2(e, c), sub2(b, c)).signum();
            if (o1 == 0 && within(c, a, b))
                || (o2 == 0 && within(e, a, b))
                || (o3 == 0 && within(a, c, e))
                || (o4 == 0 && within(b, c, e))
            {
                return None;
            }
            if o1 * o2 >= 0 || o3 * o4 >= 0 {
                continue;
            }
            let (di, dj) = (sub2(b, a), sub2(e, c));
            let mut den = cross2(di, dj);
            let mut ti = cross2(sub2(c, a), dj);
            let mut tj = cross2(sub2(c, a), di);
            if den < 0 {
                den = -den;
                ti = -ti;
                tj = -tj;
            }
            // heights along d at the crossing, scaled by den
            let (vi, vj) = (vertices[i], vertices[j]);
            let ei =
                [vertices[(i + 1) % m][0] - vi[0], vertices[(i + 1) % m][1] - vi[1], vertices[(i + 1) % m][2] - vi[2]];
            let ej =
                [vertices[(j + 1) % m][0] - vj[0], vertices[(j + 1) % m][1] - vj[1], vertices[(j + 1) % m][2] - vj[2]];
            let hi = dot3(vi, d) * den + ti * dot3(ei, d);
            let hj = dot3(vj, d) * den + tj * dot3(ej, d);
            if hi == hj {
                return None;
            }
            let i_over = hi > hj;
            let (over_dir, under_dir) = if i_over { (di, dj) } else { (dj, di) };
            let sign = if cross2(over_dir, under_dir) > 0 { 1i8 } else { -1 };
            let id = signs.len();
            signs.push(sign);
            events[i].push(Event { num: ti, den, crossing: id, over: i_over });
            events[j].push(Event { num: tj, den, crossing: id, over: !i_over });
        }
    }

    let n = signs.len();
    if n == 0 {
        return Some(KnotDiagram::unknot());
    }
    // passage order along the polygon
    let mut passages: Vec<(usize, bool)> = Vec::with_capacity(2 * n);
    for evs in &mut events {
        evs.sort_by(|x, y| (x.num * y.den).cmp(&(y.num * x.den)));
        for w in evs.windows(2) {
            if w[0].num * w[1].den == w[1].num * w[0].den {
                return None;
            }
        }
        passages.extend(evs.iter().map(|e| (e.crossing, e.over)));
    }
    let total = 2 * n as u32;
    let mut under: Vec<(u32, u32)> = vec![(0, 0); n];
    let mut over: Vec<(u32, u32)> = vec![(0, 0); n];
    for (k, &(c, is_over)) in passages.iter().enumerate() {
        let k = k as u32;
        let inc = if k == 0 { total } else { k };
        let out = k + 1;
        if is_over {
            over[c] = (inc, out);
        } else {
            under[c] = (inc, out);
        }
    }
    let crossings = (0..n)
        .map(|c| {
            let (ui, uo) = under[c];
            let (oi, oo) = over[c];
            if signs[c] > 0 {
                Crossing::new([ui, oo, uo, oi], 1)
            } else {
                Crossing::new([ui, oi, uo, oo], -1)
            }
        })
        .collect();
    Some(KnotDiagram { crossings, free_loops: 0 })
}

pub fn random_direction<R: Rng>(rng: &mut R) -> P3 {
    [
        rng.gen_range(-DIRECTION_RANGE..=DIRECTION_RANGE),
        rng.gen_range(-DIRECTION_RANGE..=DIRECTION_RANGE),
        rng.gen_range(1..=DIRECTION_RANGE),
    ]
}

/// Regular projection with the fewest crossings among `tries` random
/// directions drawn from `seed`.
pub fn project(vertices: &[P3], seed: u64, tries: usize) -> Result<KnotDiagram> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut best: Option<KnotDiagram> = None;
    let mut attempts = 0;
    let mut regular = 0;
    while regular < tries.max(1) {
        attempts += 1;
        if attempts > 64 + 4 * tries {
            break;
        }
        if let Some(d) = project_along(vertices, random_direction(&mut rng)) {
            regular += 1;
            if best.as_ref().is_none_or(|b| d.crossing_count() < b.crossing_count()) {
                best = Some(d);
            }
        }
    }
    best.ok_or(Error::DegenerateProjection(attempts))
}
