//! Oriented planar diagrams in PD form.
//!
//! A crossing stores four edge labels in counterclockwise order starting from
//! the incoming under-strand, `[i, j, k, l]`: the under-strand runs `i -> k`.
//! For a positive crossing the over-strand runs `l -> j`, for a negative one
//! `j -> l`. Every label occurs exactly twice in a diagram, once as an
//! outgoing slot and once as an incoming slot. Crossingless unknotted
//! components are counted in `free_loops`.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub labels: [u32; 4],
    /// +1 or -1.
    pub sign: i8,
}

impl Crossing {
    pub fn new(labels: [u32; 4], sign: i8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Crossing { labels, sign }
    }

    #[inline]
    pub fn over_in_slot(&self) -> usize {
        if self.sign > 0 {
            3
        } else {
            1
        }
    }

    #[inline]
    pub fn over_out_slot(&self) -> usize {
        if self.sign > 0 {
            1
        } else {
            3
        }
    }

    #[inline]
    pub fn is_incoming_slot(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_in_slot()
    }

    /// Slot through which a strand entering at `slot` leaves.
    #[inline]
    pub fn exit_slot(&self, slot: usize) -> usize {
        if slot == 0 {
            2
        } else {
            self.over_out_slot()
        }
    }

    /// The same crossing with over and under exchanged.
    pub fn switched(&self) -> Crossing {
        let [i, j, k, l] = self.labels;
        if self.sign > 0 {
            Crossing::new([l, i, j, k], -1)
        } else {
            Crossing::new([j, k, l, i], 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct KnotDiagram {
    pub crossings: Vec<Crossing>,
    pub free_loops: u32,
}

impl KnotDiagram {
    pub fn unknot() -> Self {
        KnotDiagram { crossings: Vec::new(), free_loops: 1 }
    }

    pub fn unlink(n: u32) -> Self {
        KnotDiagram { crossings: Vec::new(), free_loops: n }
    }

    pub fn new(crossings: Vec<Crossing>, free_loops: u32) -> Result<Self> {
        let d = KnotDiagram { crossings, free_loops };
        d.check()?;
        Ok(d)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign as i32).sum()
    }

    /// PD 4-tuples.
    pub fn pd_code(&self) -> Vec<[u32; 4]> {
        self.crossings.iter().map(|c| c.labels).collect()
    }

    /// Parses `(a,b,c,d)(e,f,g,h)...` for a knot whose labels run `1..=2n`
    /// consecutively along the orientation. An empty string is the unknot.
    pub fn from_pd_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidDiagram(format!("PD `{s}`: {msg}"));
        let mut tuples = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`".into()))?;
            let close = open.find(')').ok_or_else(|| bad("missing `)`".into()))?;
            let mut t = [0u32; 4];
            let parts: Vec<&str> = open[..close].split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(bad("crossings need four labels".into()));
            }
            for (slot, part) in parts.iter().enumerate() {
                t[slot] = part.parse().map_err(|_| bad(format!("bad label `{part}`")))?;
                if t[slot] == 0 {
                    return Err(bad("labels are positive".into()));
                }
            }
            tuples.push(t);
            rest = open[close + 1..].trim_start();
        }
        Self::from_knot_pd(&tuples)
    }

    /// Builds a knot diagram from PD tuples, inferring crossing signs from the
    /// consecutive labelling `1..=2n`.
    pub fn from_knot_pd(tuples: &[[u32; 4]]) -> Result<Self> {
        if tuples.is_empty() {
            return Ok(Self::unknot());
        }
        let m = 2 * tuples.len() as u32;
        let succ = |x: u32| if x == m { 1 } else { x + 1 };
        let mut crossings = Vec::with_capacity(tuples.len());
        for t in tuples {
            let [i, j, k, l] = *t;
            if [i, j, k, l].iter().any(|&x| x == 0 || x > m) {
                return Err(Error::InvalidDiagram(format!("label out of range in {t:?}")));
            }
            if succ(i) != k {
                return Err(Error::InvalidDiagram(format!("under-strand of {t:?} is not consecutive")));
            }
            let sign = if succ(l) == j {
                1
            } else if succ(j) == l {
                -1
            } else {
                return Err(Error::InvalidDiagram(format!("over-strand of {t:?} is not consecutive")));
            };
            crossings.push(Crossing::new(*t, sign));
        }
        Self::new(crossings, 0)
    }

    pub fn to_pd_string(&self) -> String {
        self.crossings
            .iter()
            .map(|c| format!("({},{},{},{})", c.labels[0], c.labels[1], c.labels[2], c.labels[3]))
            .collect()
    }

    /// Mirror image (reflection of the projection plane).
    pub fn mirror(&self) -> Self {
        KnotDiagram {
            crossings: self
                .crossings
                .iter()
                .map(|c| {
                    let [i, j, k, l] = c.labels;
                    Crossing::new([i, l, k, j], -c.sign)
                })
                .collect(),
            free_loops: self.free_loops,
        }
    }

    /// `(crossing, slot)` where each label enters a crossing.
    pub(crate) fn heads(&self) -> FxHashMap<u32, (u32, u8)> {
        let mut heads = FxHashMap::default();
        for (ci, c) in self.crossings.iter().enumerate() {
            for slot in 0..4 {
                if c.is_incoming_slot(slot) {
                    heads.insert(c.labels[slot], (ci as u32, slot as u8));
                }
            }
        }
        heads
    }

    /// Checks that each label occurs exactly once as incoming and once as outgoing.
    pub fn check(&self) -> Result<()> {
        let mut seen: FxHashMap<u32, (u8, u8)> = FxHashMap::default();
        for c in &self.crossings {
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::InvalidDiagram(format!("bad sign in {c:?}")));
            }
            for slot in 0..4 {
                let e = seen.entry(c.labels[slot]).or_default();
                if c.is_incoming_slot(slot) {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
        }
        for (label, (ins, outs)) in seen {
            if ins != 1 || outs != 1 {
                return Err(Error::InvalidDiagram(format!("label {label} occurs {ins} in / {outs} out")));
            }
        }
        Ok(())
    }

    /// Label sequences of the strand components that pass through crossings,
    /// each starting at its smallest label.
    pub fn strand_components(&self) -> Vec<Vec<u32>> {
        let heads = self.heads();
        let mut labels: Vec<u32> = heads.keys().copied().collect();
        labels.sort_unstable();
        let mut done: FxHashMap<u32, bool> = FxHashMap::default();
        let mut comps = Vec::new();
        for &start in &labels {
            if done.contains_key(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut cur = start;
            loop {
                done.insert(cur, true);
                comp.push(cur);
                let (ci, slot) = heads[&cur];
                let c = &self.crossings[ci as usize];
                cur = c.labels[c.exit_slot(slot as usize)];
                if cur == start {
                    break;
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn component_count(&self) -> usize {
        self.strand_components().len() + self.free_loops as usize
    }

    /// Removes the given crossings, joining each listed `(incoming, outgoing)`
    /// label pair into a single edge. A pair that closes up becomes a free loop.
    pub(crate) fn excise(&self, remove: &[usize], joins: &[(u32, u32)]) -> KnotDiagram {
        let mut alias: FxHashMap<u32, u32> = FxHashMap::default();
        fn find(alias: &FxHashMap<u32, u32>, mut x: u32) -> u32 {
            while let Some(&y) = alias.get(&x) {
                x = y;
            }
            x
        }
        let mut free_loops = self.free_loops;
        for &(inc, out) in joins {
            let (a, b) = (find(&alias, inc), find(&alias, out));
            if a == b {
                free_loops += 1;
            } else {
                alias.insert(b, a);
            }
        }
        let crossings = self
            .crossings
            .iter()
            .enumerate()
            .filter(|(i, _)| !remove.contains(i))
            .map(|(_, c)| Crossing::new(c.labels.map(|l| find(&alias, l)), c.sign))
            .collect();
        KnotDiagram { crossings, free_loops }
    }

    fn passes(c: &Crossing) -> [(u32, u32); 2] {
        [(c.labels[0], c.labels[2]), (c.labels[c.over_in_slot()], c.labels[c.over_out_slot()])]
    }

    pub fn switch(&mut self, idx: usize) {
        self.crossings[idx] = self.crossings[idx].switched();
    }

    /// Oriented (Seifert) smoothing of crossing `idx`.
    pub fn smooth(&self, idx: usize) -> KnotDiagram {
        let c = &self.crossings[idx];
        let [i, j, k, l] = c.labels;
        let joins = if c.sign > 0 { [(i, j), (l, k)] } else { [(i, l), (j, k)] };
        self.excise(&[idx], &joins)
    }

    /// Relabels edges `1..` in order of first appearance.
    pub fn compact_labels(&self) -> KnotDiagram {
        let mut map: FxHashMap<u32, u32> = FxHashMap::default();
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                Crossing::new(
                    c.labels.map(|l| {
                        let n = map.len() as u32 + 1;
                        *map.entry(l).or_insert(n)
                    }),
                    c.sign,
                )
            })
            .collect();
        KnotDiagram { crossings, free_loops: self.free_loops }
    }

    /// For a knot, relabels edges `1..=2n` along the orientation starting from
    /// the smallest label, giving a standard PD code.
    pub fn standard_labels(&self) -> Result<KnotDiagram> {
        let comps = self.strand_components();
        if comps.len() != 1 || self.free_loops != 0 {
            if comps.is_empty() {
                return Ok(self.clone());
            }
            return Err(Error::InvalidDiagram("standard labelling needs a knot".into()));
        }
        let map: FxHashMap<u32, u32> = comps[0].iter().enumerate().map(|(i, &l)| (l, i as u32 + 1)).collect();
        Ok(KnotDiagram {
            crossings: self.crossings.iter().map(|c| Crossing::new(c.labels.map(|l| map[&l]), c.sign)).collect(),
            free_loops: 0,
        })
    }

    /// `(crossing, slot)` at the other end of the edge leaving `(crossing, slot)`.
    fn neighbor_table(&self) -> Vec<[(u32, u8); 4]> {
        let mut first: FxHashMap<u32, (u32, u8)> = FxHashMap::default();
        let mut table = vec![[(0u32, 0u8); 4]; self.crossings.len()];
        for (ci, c) in self.crossings.iter().enumerate() {
            for slot in 0..4 {
                let here = (ci as u32, slot as u8);
                if let Some(other) = first.remove(&c.labels[slot]) {
                    table[ci][slot] = other;
                    table[other.0 as usize][other.1 as usize] = here;
                } else {
                    first.insert(c.labels[slot], here);
                }
            }
        }
        table
    }

    fn find_r1(&self) -> Option<usize> {
        self.crossings.iter().position(|c| {
            let l = c.labels;
            l[0] == l[1] || l[1] == l[2] || l[2] == l[3] || l[3] == l[0]
        })
    }

    /// A bigon face whose two edges each stay on the same level at both ends.
    fn find_r2(&self, nb: &[[(u32, u8); 4]]) -> Option<(usize, usize)> {
        for (c1, row) in nb.iter().enumerate() {
            for (p, &(c2, q)) in row.iter().enumerate() {
                if c2 as usize == c1 {
                    continue;
                }
                // walk the face to the left: leave c1 by p, arrive at c2 by q,
                // turn to slot q-1, which must return to c1 at slot p+1
                let q_next = (q as usize + 3) % 4;
                let (back, back_slot) = nb[c2 as usize][q_next];
                if back as usize != c1 || back_slot as usize != (p + 1) % 4 {
                    continue;
                }
                if (p % 2) == (q as usize % 2) {
                    return Some((c1, c2 as usize));
                }
            }
        }
        None
    }

    /// Applies crossing-reducing Reidemeister I and II moves until none applies.
    pub fn simplify(&self) -> KnotDiagram {
        let mut d = self.clone();
        loop {
            if let Some(ci) = d.find_r1() {
                let passes = Self::passes(&d.crossings[ci]);
                d = d.excise(&[ci], &passes);
                continue;
            }
            let nb = d.neighbor_table();
            if let Some((c1, c2)) = d.find_r2(&nb) {
                let mut joins = Vec::with_capacity(4);
                joins.extend_from_slice(&Self::passes(&d.crossings[c1]));
                joins.extend_from_slice(&Self::passes(&d.crossings[c2]));
                d = d.excise(&[c1, c2], &joins);
                continue;
            }
            return d;
        }
    }

    /// Key identifying the diagram up to relabelling and planar isotopy.
    pub fn canonical_key(&self) -> Vec<u32> {
        let n = self.crossings.len();
        let nb = self.neighbor_table();
        let mut comp_of = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if comp_of[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut stack = vec![s];
            comp_of[s] = id;
            let mut members = Vec::new();
            while let Some(c) = stack.pop() {
                members.push(c);
                for &(o, _) in &nb[c] {
                    if comp_of[o as usize] == usize::MAX {
                        comp_of[o as usize] = id;
                        stack.push(o as usize);
                    }
                }
            }
            comps.push(members);
        }
        let mut codes: Vec<Vec<u32>> = Vec::with_capacity(comps.len());
        let mut order = vec![u32::MAX; n];
        let mut queue: Vec<usize> = Vec::with_capacity(n);
        let mut code: Vec<u32> = Vec::with_capacity(9 * n);
        for members in &comps {
            let mut best: Option<Vec<u32>> = None;
            for &start in members {
                for &m in members {
                    order[m] = u32::MAX;
                }
                queue.clear();
                code.clear();
                order[start] = 0;
                queue.push(start);
                let mut head = 0;
                let mut worse = false;
                while head < queue.len() {
                    let c = queue[head];
                    head += 1;
                    code.push((self.crossings[c].sign > 0) as u32);
                    for &(o, q) in &nb[c] {
                        let o = o as usize;
                        if order[o] == u32::MAX {
                            order[o] = queue.len() as u32;
                            queue.push(o);
                        }
                        code.push(order[o] * 4 + q as u32);
                    }
                    if let Some(b) = &best {
                        if code[..] > b[..code.len()] {
                            worse = true;
                            break;
                        }
                    }
                }
                if worse {
                    continue;
                }
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code.clone());
                }
            }
            codes.push(best.unwrap_or_default());
        }
        codes.sort();
        let mut key = vec![self.free_loops, codes.len() as u32];
        for c in codes {
            key.push(c.len() as u32);
            key.extend(c);
        }
        key
    }

    /// Faces of the planar diagram as cyclic lists of `(crossing, slot)` darts.
    pub fn faces(&self) -> Vec<Vec<(u32, u8)>> {
        let nb = self.neighbor_table();
        let n = self.crossings.len();
        let mut used = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for c in 0..n {
            for p in 0..4 {
                if used[c][p] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut cc, mut pp) = (c, p);
                while !used[cc][pp] {
                    used[cc][pp] = true;
                    face.push((cc as u32, pp as u8));
                    let (o, q) = nb[cc][pp];
                    cc = o as usize;
                    pp = (q as usize + 3) % 4;
                }
                faces.push(face);
            }
        }
        faces
    }
}

impl fmt::Display for KnotDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pd_string())?;
        if self.free_loops > 0 && !self.crossings.is_empty() {
            write!(f, " + {} loop(s)", self.free_loops)?;
        } else if self.crossings.is_empty() {
            write!(f, "O^{}", self.free_loops)?;
        }
        Ok(())
    }
}
