//! Oriented planar diagrams in PD form.
//!
//! A crossing lists its four incident arcs counterclockwise, starting with the
//! incoming under-strand. Slot 2 is therefore always the outgoing under-strand;
//! the sign decides which of slots 1 and 3 carries the incoming over-strand.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub type ArcId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn from_value(v: i32) -> Sign {
        if v < 0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub slots: [ArcId; 4],
    pub sign: Sign,
}

impl Crossing {
    /// Slot of the incoming over-strand.
    pub fn over_in(&self) -> usize {
        match self.sign {
            Sign::Positive => 3,
            Sign::Negative => 1,
        }
    }

    pub fn over_out(&self) -> usize {
        (self.over_in() + 2) % 4
    }

    pub fn is_incoming(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_in()
    }

    pub fn is_over(slot: usize) -> bool {
        slot % 2 == 1
    }

    /// Outgoing slot joined to an incoming slot by the oriented smoothing.
    pub fn seifert_successor(&self, slot_in: usize) -> usize {
        match (self.sign, slot_in) {
            (Sign::Positive, 0) => 1,
            (Sign::Positive, 3) => 2,
            (Sign::Negative, 0) => 3,
            (Sign::Negative, 1) => 2,
            _ => unreachable!("slot {slot_in} is not incoming"),
        }
    }

    /// The same crossing with over and under exchanged.
    pub fn switched(&self) -> Crossing {
        let [i, j, k, l] = self.slots;
        match self.sign {
            Sign::Positive => Crossing {
                slots: [l, i, j, k],
                sign: Sign::Negative,
            },
            Sign::Negative => Crossing {
                slots: [j, k, l, i],
                sign: Sign::Positive,
            },
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("arc {arc} appears {count} times (expected 2)")]
    ArcMultiplicity { arc: ArcId, count: usize },
    #[error("arc {arc} is oriented inconsistently")]
    Orientation { arc: ArcId },
    #[error("diagram is not planar: {faces} faces for {crossings} crossings in {pieces} pieces")]
    NotPlanar {
        faces: usize,
        crossings: usize,
        pieces: usize,
    },
    #[error("connected sum needs knots, got {components} components")]
    NotAKnot { components: usize },
}

/// Position of an arc end: crossing index and slot.
pub type End = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    loops: u32,
}

impl PlanarDiagram {
    pub fn unknot() -> Self {
        PlanarDiagram {
            crossings: Vec::new(),
            loops: 1,
        }
    }

    /// Split unlink of `n` crossing-free circles.
    pub fn unlink(n: u32) -> Self {
        PlanarDiagram {
            crossings: Vec::new(),
            loops: n,
        }
    }

    /// Builds a diagram from crossings whose arc labels are `0..2n`. Labels
    /// must occur once as an incoming and once as an outgoing slot.
    pub fn new(crossings: Vec<Crossing>, loops: u32) -> Result<Self, DiagramError> {
        let d = PlanarDiagram { crossings, loops };
        d.check_incidence()?;
        Ok(d)
    }

    pub(crate) fn from_parts_unchecked(crossings: Vec<Crossing>, loops: u32) -> Self {
        let d = PlanarDiagram { crossings, loops };
        debug_assert!(d.check_incidence().is_ok(), "bad incidence: {d:?}");
        d
    }

    fn check_incidence(&self) -> Result<(), DiagramError> {
        let n = self.arc_count();
        let mut ins = vec![0usize; n];
        let mut outs = vec![0usize; n];
        for c in &self.crossings {
            for (s, &a) in c.slots.iter().enumerate() {
                let a_idx = a as usize;
                if a_idx >= n {
                    return Err(DiagramError::ArcMultiplicity { arc: a, count: 1 });
                }
                if c.is_incoming(s) {
                    ins[a_idx] += 1;
                } else {
                    outs[a_idx] += 1;
                }
            }
        }
        for a in 0..n {
            let total = ins[a] + outs[a];
            if total != 2 {
                return Err(DiagramError::ArcMultiplicity {
                    arc: a as ArcId,
                    count: total,
                });
            }
            if ins[a] != 1 {
                return Err(DiagramError::Orientation { arc: a as ArcId });
            }
        }
        Ok(())
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Crossing-free circles carried alongside the crossings.
    pub fn free_loops(&self) -> u32 {
        self.loops
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    /// For every arc, its tail (outgoing slot) and head (incoming slot).
    pub fn arc_ends(&self) -> Vec<(End, End)> {
        let n = self.arc_count();
        let mut tails = vec![(usize::MAX, 0); n];
        let mut heads = vec![(usize::MAX, 0); n];
        for (ci, c) in self.crossings.iter().enumerate() {
            for s in 0..4 {
                let a = c.slots[s] as usize;
                if c.is_incoming(s) {
                    heads[a] = (ci, s);
                } else {
                    tails[a] = (ci, s);
                }
            }
        }
        tails.into_iter().zip(heads).collect()
    }

    /// Arc following `arc` along its strand.
    pub fn next_arc(&self, ends: &[(End, End)], arc: ArcId) -> ArcId {
        let (ci, s) = ends[arc as usize].1;
        self.crossings[ci].slots[(s + 2) % 4]
    }

    /// Components that pass through at least one crossing, as arc sequences
    /// in orientation order, each starting at its smallest arc.
    pub fn strand_components(&self) -> Vec<Vec<ArcId>> {
        let ends = self.arc_ends();
        let n = self.arc_count();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut a = start as ArcId;
            while !seen[a as usize] {
                seen[a as usize] = true;
                comp.push(a);
                a = self.next_arc(&ends, a);
            }
            comps.push(comp);
        }
        comps
    }

    pub fn component_count(&self) -> usize {
        self.strand_components().len() + self.loops as usize
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    pub fn mirror(&self) -> PlanarDiagram {
        PlanarDiagram {
            crossings: self.crossings.iter().map(Crossing::switched).collect(),
            loops: self.loops,
        }
    }

    /// Reverses the orientation of every component.
    pub fn reversed(&self) -> PlanarDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let [i, j, k, l] = c.slots;
                Crossing {
                    slots: [k, l, i, j],
                    sign: c.sign,
                }
            })
            .collect();
        PlanarDiagram {
            crossings,
            loops: self.loops,
        }
    }

    /// Changes over/under at one crossing.
    pub fn switch_crossing(&self, idx: usize) -> PlanarDiagram {
        let mut crossings = self.crossings.clone();
        crossings[idx] = crossings[idx].switched();
        PlanarDiagram {
            crossings,
            loops: self.loops,
        }
    }

    /// Orientation-respecting smoothing of one crossing.
    pub fn smooth_crossing(&self, idx: usize) -> PlanarDiagram {
        let c = self.crossings[idx];
        let oi = c.over_in();
        let joins = [
            (c.slots[0], c.slots[c.seifert_successor(0)]),
            (c.slots[oi], c.slots[c.seifert_successor(oi)]),
        ];
        self.rewire(&[idx], &joins)
    }

    /// Deletes crossings, identifies the listed arc pairs and relabels.
    /// Arc classes left without any crossing become free loops.
    pub(crate) fn rewire(&self, remove: &[usize], joins: &[(ArcId, ArcId)]) -> PlanarDiagram {
        let n = self.arc_count();
        let mut uf = UnionFind::new(n);
        for &(a, b) in joins {
            uf.union(a as usize, b as usize);
        }
        let mut kept: Vec<Crossing> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|(i, _)| !remove.contains(i))
            .map(|(_, c)| *c)
            .collect();
        let mut used = vec![false; n];
        for c in &mut kept {
            for s in 0..4 {
                let r = uf.find(c.slots[s] as usize);
                c.slots[s] = r as ArcId;
                used[r] = true;
            }
        }
        let mut orphan_classes = std::collections::BTreeSet::new();
        for a in 0..n {
            let r = uf.find(a);
            if !used[r] {
                orphan_classes.insert(r);
            }
        }
        let mut relabel = HashMap::new();
        for c in &mut kept {
            for s in 0..4 {
                let next = relabel.len() as ArcId;
                c.slots[s] = *relabel.entry(c.slots[s]).or_insert(next);
            }
        }
        PlanarDiagram::from_parts_unchecked(kept, self.loops + orphan_classes.len() as u32)
    }

    /// Relabels arcs in traversal order. Components are visited starting from
    /// the one holding the lowest arc; crossings are sorted by their incoming
    /// under-arc.
    pub fn normalized(&self) -> PlanarDiagram {
        let comps = self.strand_components();
        let mut relabel = vec![0 as ArcId; self.arc_count()];
        let mut next = 0;
        for comp in &comps {
            for &a in comp {
                relabel[a as usize] = next;
                next += 1;
            }
        }
        let mut crossings: Vec<Crossing> = self
            .crossings
            .iter()
            .map(|c| Crossing {
                slots: c.slots.map(|a| relabel[a as usize]),
                sign: c.sign,
            })
            .collect();
        crossings.sort_by_key(|c| c.slots[0]);
        PlanarDiagram {
            crossings,
            loops: self.loops,
        }
    }

    /// Joins two knot diagrams by cutting arc 0 of each.
    pub fn connected_sum(&self, other: &PlanarDiagram) -> Result<PlanarDiagram, DiagramError> {
        for d in [self, other] {
            let k = d.component_count();
            if k != 1 {
                return Err(DiagramError::NotAKnot { components: k });
            }
        }
        if self.crossings.is_empty() {
            return Ok(other.clone());
        }
        if other.crossings.is_empty() {
            return Ok(self.clone());
        }
        let offset = self.arc_count() as ArcId;
        let ends1 = self.arc_ends();
        let ends2 = other.arc_ends();
        let mut crossings = self.crossings.clone();
        let base = crossings.len();
        crossings.extend(other.crossings.iter().map(|c| Crossing {
            slots: c.slots.map(|a| a + offset),
            sign: c.sign,
        }));
        // arc 0 of self now runs into the head of arc 0 of other, and vice versa
        let (h1c, h1s) = ends1[0].1;
        let (h2c, h2s) = ends2[0].1;
        crossings[h1c].slots[h1s] = offset;
        crossings[base + h2c].slots[h2s] = 0;
        Ok(PlanarDiagram::from_parts_unchecked(crossings, 0).normalized())
    }

    /// Faces of the rotation system, as cycles of darts. Dart `2a` runs along
    /// arc `a`, dart `2a+1` against it; each face keeps itself on the left.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let ends = self.arc_ends();
        let nd = 2 * self.arc_count();
        let mut seen = vec![false; nd];
        let mut faces = Vec::new();
        for start in 0..nd {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut dart = start;
            while !seen[dart] {
                seen[dart] = true;
                face.push(dart);
                dart = self.next_face_dart(&ends, dart);
            }
            faces.push(face);
        }
        faces
    }

    pub(crate) fn next_face_dart(&self, ends: &[(End, End)], dart: usize) -> usize {
        let arc = dart / 2;
        let (ci, s) = if dart.is_multiple_of(2) {
            ends[arc].1
        } else {
            ends[arc].0
        };
        let t = (s + 3) % 4;
        let next_arc = self.crossings[ci].slots[t] as usize;
        if ends[next_arc].0 == (ci, t) {
            2 * next_arc
        } else {
            2 * next_arc + 1
        }
    }

    /// Groups of crossings connected through shared arcs.
    pub fn pieces(&self) -> Vec<Vec<usize>> {
        let ends = self.arc_ends();
        let mut uf = UnionFind::new(self.crossings.len());
        for &((c1, _), (c2, _)) in &ends {
            uf.union(c1, c2);
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..self.crossings.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Extracts the given crossings (assumed closed under shared arcs).
    pub(crate) fn sub_diagram(&self, idx: &[usize]) -> PlanarDiagram {
        let mut relabel = HashMap::new();
        let crossings = idx
            .iter()
            .map(|&i| {
                let c = self.crossings[i];
                Crossing {
                    slots: c.slots.map(|a| {
                        let next = relabel.len() as ArcId;
                        *relabel.entry(a).or_insert(next)
                    }),
                    sign: c.sign,
                }
            })
            .collect();
        PlanarDiagram::from_parts_unchecked(crossings, 0)
    }

    /// Euler-characteristic planarity test on the rotation system.
    pub fn check_planar(&self) -> Result<(), DiagramError> {
        let pieces = self.pieces().len();
        let faces = self.faces().len();
        let v = self.crossings.len();
        // V - E + F = 1 + pieces with E = 2V
        if v > 0 && faces != v + 1 + pieces {
            return Err(DiagramError::NotPlanar {
                faces,
                crossings: v,
                pieces,
            });
        }
        Ok(())
    }

    /// Lexicographically least traversal relabelling over all start arcs.
    /// Equal keys mean identical diagrams up to relabelling.
    pub fn canonical_key(&self) -> Vec<u32> {
        let n = self.arc_count();
        if n == 0 {
            return vec![self.loops];
        }
        let ends = self.arc_ends();
        let mut best: Option<Vec<u32>> = None;
        let mut relabel = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(self.crossings.len());
        let mut visited = vec![false; self.crossings.len()];
        for start in 0..n {
            relabel.iter_mut().for_each(|x| *x = u32::MAX);
            visited.iter_mut().for_each(|x| *x = false);
            order.clear();
            let mut next = 0u32;
            let mut cursor = 0usize;
            let mut current = Some(start as ArcId);
            while let Some(s) = current {
                let mut a = s;
                while relabel[a as usize] == u32::MAX {
                    relabel[a as usize] = next;
                    next += 1;
                    let (ci, _) = ends[a as usize].1;
                    if !visited[ci] {
                        visited[ci] = true;
                        order.push(ci);
                    }
                    a = self.next_arc(&ends, a);
                }
                current = None;
                while cursor < order.len() && current.is_none() {
                    let c = &self.crossings[order[cursor]];
                    current = c
                        .slots
                        .iter()
                        .copied()
                        .find(|&x| relabel[x as usize] == u32::MAX);
                    if current.is_none() {
                        cursor += 1;
                    }
                }
                if current.is_none() && (next as usize) < n {
                    // disconnected pieces: fall back to the lowest unlabelled arc
                    current = (0..n as ArcId).find(|&x| relabel[x as usize] == u32::MAX);
                }
            }
            let mut tuples: Vec<[u32; 5]> = self
                .crossings
                .iter()
                .map(|c| {
                    let s = c.slots.map(|a| relabel[a as usize]);
                    [s[0], s[1], s[2], s[3], c.sign as u32]
                })
                .collect();
            tuples.sort_unstable();
            let mut key = Vec::with_capacity(5 * tuples.len() + 1);
            key.push(self.loops);
            for t in tuples {
                key.extend_from_slice(&t);
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        best.unwrap()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::codec::emit_pd(self))
    }
}
