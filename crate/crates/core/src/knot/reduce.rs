//! Isotopy-preserving vertex elimination for closed polygons.
//!
//! A vertex `v` with neighbours `a`, `b` is deleted when the closed triangle
//! `a v b` meets no other edge of the polygon. All predicates are exact
//! integer determinants.

use crate::lattice::Point;

pub type P3 = [i64; 3];

#[inline]
fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn cross(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
fn dot(a: P3, b: P3) -> i128 {
    a[0] as i128 * b[0] as i128 + a[1] as i128 * b[1] as i128 + a[2] as i128 * b[2] as i128
}

/// Sign of the volume of tetrahedron `a b c d`.
#[inline]
fn orient3d(a: P3, b: P3, c: P3, d: P3) -> i32 {
    let (u, v, w) = (sub(b, a), sub(c, a), sub(d, a));
    let n = [
        u[1] as i128 * v[2] as i128 - u[2] as i128 * v[1] as i128,
        u[2] as i128 * v[0] as i128 - u[0] as i128 * v[2] as i128,
        u[0] as i128 * v[1] as i128 - u[1] as i128 * v[0] as i128,
    ];
    let det = n[0] * w[0] as i128 + n[1] * w[1] as i128 + n[2] * w[2] as i128;
    det.signum() as i32
}

#[inline]
fn orient2d(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> i32 {
    let det = (b[0] - a[0]) as i128 * (c[1] - a[1]) as i128 - (b[1] - a[1]) as i128 * (c[0] - a[0]) as i128;
    det.signum() as i32
}

fn on_segment_2d(p: [i64; 2], q: [i64; 2], r: [i64; 2]) -> bool {
    r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
}

/// Closed segment intersection in the plane.
fn segments_meet_2d(p: [i64; 2], q: [i64; 2], r: [i64; 2], s: [i64; 2]) -> bool {
    let d1 = orient2d(r, s, p);
    let d2 = orient2d(r, s, q);
    let d3 = orient2d(p, q, r);
    let d4 = orient2d(p, q, s);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment_2d(r, s, p))
        || (d2 == 0 && on_segment_2d(r, s, q))
        || (d3 == 0 && on_segment_2d(p, q, r))
        || (d4 == 0 && on_segment_2d(p, q, s))
}

fn inside_triangle_2d(p: [i64; 2], t: [[i64; 2]; 3]) -> bool {
    let s = [orient2d(t[0], t[1], p), orient2d(t[1], t[2], p), orient2d(t[2], t[0], p)];
    s.iter().all(|&x| x >= 0) || s.iter().all(|&x| x <= 0)
}

/// Coordinate axis to drop when projecting the plane with normal `n`.
fn drop_axis(n: P3) -> usize {
    let m = n.map(|x| x.abs());
    if m[0] >= m[1] && m[0] >= m[2] {
        0
    } else if m[1] >= m[2] {
        1
    } else {
        2
    }
}

#[inline]
fn flat(p: P3, axis: usize) -> [i64; 2] {
    match axis {
        0 => [p[1], p[2]],
        1 => [p[0], p[2]],
        _ => [p[0], p[1]],
    }
}

/// Whether the closed segment `pq` meets the closed triangle `t`.
pub fn segment_meets_triangle(p: P3, q: P3, t: [P3; 3]) -> bool {
    let op = orient3d(t[0], t[1], t[2], p);
    let oq = orient3d(t[0], t[1], t[2], q);
    if op * oq > 0 {
        return false;
    }
    if op == 0 && oq == 0 {
        let axis = drop_axis(cross(sub(t[1], t[0]), sub(t[2], t[0])));
        let (p2, q2) = (flat(p, axis), flat(q, axis));
        let t2 = t.map(|x| flat(x, axis));
        return inside_triangle_2d(p2, t2)
            || inside_triangle_2d(q2, t2)
            || (0..3).any(|i| segments_meet_2d(p2, q2, t2[i], t2[(i + 1) % 3]));
    }
    let s1 = orient3d(p, q, t[0], t[1]);
    let s2 = orient3d(p, q, t[1], t[2]);
    let s3 = orient3d(p, q, t[2], t[0]);
    (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0)
}

/// Whether a segment from triangle vertex `t[k]` to `x` meets the triangle
/// anywhere other than `t[k]`.
fn spoke_meets_triangle(x: P3, k: usize, t: [P3; 3]) -> bool {
    if orient3d(t[0], t[1], t[2], x) != 0 {
        return false;
    }
    let apex = t[k];
    let e1 = sub(t[(k + 1) % 3], apex);
    let e2 = sub(t[(k + 2) % 3], apex);
    let w = sub(x, apex);
    let n = cross(e1, e2);
    // w lies in the closed cone spanned by e1 and e2
    let c1 = dot(cross(e1, w), n);
    let c2 = dot(cross(w, e2), n);
    if c1 < 0 || c2 < 0 {
        return false;
    }
    if c1 == 0 || c2 == 0 {
        // along an edge ray: only the forward direction overlaps
        return dot(w, if c1 == 0 { e1 } else { e2 }) > 0;
    }
    true
}

/// Whether segment `pq` blocks removal of the middle vertex of `t`, where the
/// segment may share an endpoint with the outer vertices `t[0]`, `t[2]`.
fn blocks(p: P3, q: P3, t: [P3; 3]) -> bool {
    let shared = |x: P3| {
        if x == t[0] {
            Some(0)
        } else if x == t[2] {
            Some(2)
        } else {
            None
        }
    };
    match (shared(p), shared(q)) {
        (None, None) => segment_meets_triangle(p, q, t),
        (Some(k), None) => spoke_meets_triangle(q, k, t),
        (None, Some(k)) => spoke_meets_triangle(p, k, t),
        (Some(_), Some(_)) => true,
    }
}

#[derive(Copy, Clone)]
struct Bbox {
    lo: P3,
    hi: P3,
}

impl Bbox {
    fn of(pts: &[P3]) -> Bbox {
        let mut b = Bbox { lo: pts[0], hi: pts[0] };
        for p in &pts[1..] {
            b.lo = std::array::from_fn(|k| b.lo[k].min(p[k]));
            b.hi = std::array::from_fn(|k| b.hi[k].max(p[k]));
        }
        b
    }

    #[inline]
    fn overlaps(&self, o: &Bbox) -> bool {
        (0..3).all(|k| self.lo[k] <= o.hi[k] && o.lo[k] <= self.hi[k])
    }
}

/// Extra constraints for [`reduce_protected`].
#[derive(Clone, Debug, Default)]
pub struct Protection {
    /// Indices of vertices that must survive.
    pub pinned: Vec<usize>,
    /// Segments no triangle may touch, endpoints allowed on pinned vertices.
    pub obstacles: Vec<(P3, P3)>,
    /// Triangles the new edge `a b` must avoid (it may touch them at `a` or `b`).
    pub shields: Vec<[P3; 3]>,
}

pub fn to_p3(vertices: &[Point]) -> Vec<P3> {
    vertices.iter().map(|p| p.0.map(i64::from)).collect()
}

/// Reduces a closed polygon to a smaller one of the same knot type.
pub fn reduce(vertices: &[P3]) -> Vec<P3> {
    reduce_protected(vertices, &Protection::default()).0
}

/// Reduction honouring `prot`; also returns, for every pinned vertex, its
/// index in the reduced polygon.
pub fn reduce_protected(vertices: &[P3], prot: &Protection) -> (Vec<P3>, Vec<usize>) {
    let n = vertices.len();
    let mut pinned = vec![false; n];
    for &i in &prot.pinned {
        pinned[i] = true;
    }
    if n <= 3 {
        let idx = prot.pinned.clone();
        return (vertices.to_vec(), idx);
    }
    let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
    let mut alive = vec![true; n];
    let mut count = n;
    let obstacle_boxes: Vec<Bbox> = prot.obstacles.iter().map(|&(p, q)| Bbox::of(&[p, q])).collect();
    let shield_boxes: Vec<Bbox> = prot.shields.iter().map(|t| Bbox::of(t)).collect();

    // straight runs first
    for v in 0..n {
        if count <= 3 {
            break;
        }
        if pinned[v] {
            continue;
        }
        let (a, b) = (prev[v], next[v]);
        let (pa, pv, pb) = (vertices[a], vertices[v], vertices[b]);
        if cross(sub(pv, pa), sub(pb, pa)) == [0, 0, 0] && dot(sub(pv, pa), sub(pb, pv)) > 0 {
            next[a] = b;
            prev[b] = a;
            alive[v] = false;
            count -= 1;
        }
    }

    let mut seg_boxes: Vec<Bbox> = (0..n).map(|i| Bbox::of(&[vertices[i], vertices[next[i]]])).collect();
    let mut changed = true;
    while changed && count > 3 {
        changed = false;
        for v in 0..n {
            if count <= 3 {
                break;
            }
            if !alive[v] || pinned[v] {
                continue;
            }
            let (a, b) = (prev[v], next[v]);
            let t = [vertices[a], vertices[v], vertices[b]];
            if cross(sub(t[1], t[0]), sub(t[2], t[0])) == [0, 0, 0] {
                if dot(sub(t[1], t[0]), sub(t[2], t[1])) <= 0 {
                    continue;
                }
            } else {
                let tb = Bbox::of(&t);
                let mut free = true;
                // edges (b, next b) ... (prev a, a)
                let mut cur = b;
                loop {
                    let nx = next[cur];
                    if cur == a {
                        break;
                    }
                    if seg_boxes[cur].overlaps(&tb) && blocks(vertices[cur], vertices[nx], t) {
                        free = false;
                        break;
                    }
                    cur = nx;
                }
                if free {
                    for (k, &(p, q)) in prot.obstacles.iter().enumerate() {
                        if obstacle_boxes[k].overlaps(&tb) && blocks(p, q, t) {
                            free = false;
                            break;
                        }
                    }
                }
                if free && !prot.shields.is_empty() {
                    let eb = Bbox::of(&[t[0], t[2]]);
                    for (k, sh) in prot.shields.iter().enumerate() {
                        if shield_boxes[k].overlaps(&eb) && edge_meets_shield(t[0], t[2], sh) {
                            free = false;
                            break;
                        }
                    }
                }
                if !free {
                    continue;
                }
            }
            next[a] = b;
            prev[b] = a;
            alive[v] = false;
            count -= 1;
            seg_boxes[a] = Bbox::of(&[vertices[a], vertices[b]]);
            changed = true;
        }
    }

    let start = (0..n).find(|&i| alive[i]).unwrap();
    let mut out = Vec::with_capacity(count);
    let mut index = vec![usize::MAX; n];
    let mut cur = start;
    loop {
        index[cur] = out.len();
        out.push(vertices[cur]);
        cur = next[cur];
        if cur == start {
            break;
        }
    }
    let pinned_idx = prot.pinned.iter().map(|&i| index[i]).collect();
    (out, pinned_idx)
}

/// Whether segment `pq` meets triangle `sh` away from points `p`, `q`
/// themselves when those are corners of `sh`.
fn edge_meets_shield(p: P3, q: P3, sh: &[P3; 3]) -> bool {
    let kp = sh.iter().position(|&x| x == p);
    let kq = sh.iter().position(|&x| x == q);
    match (kp, kq) {
        (None, None) => segment_meets_triangle(p, q, *sh),
        (Some(k), None) => spoke_meets_triangle(q, k, *sh),
        (None, Some(k)) => spoke_meets_triangle(p, k, *sh),
        (Some(_), Some(_)) => true,
    }
}
