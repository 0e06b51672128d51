//! Seifert circles and the signed Seifert graph.

use serde::Serialize;

use crate::diagram::{ArcId, PlanarDiagram, Sign};

/// One crossing seen as an edge of the Seifert graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertArc {
    pub crossing: usize,
    pub circles: (usize, usize),
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertDecomposition {
    /// Arc sequences in orientation order. Circles are numbered by their
    /// smallest arc; crossing-free loops come last with empty sequences.
    pub circles: Vec<Vec<ArcId>>,
    /// Circle index of every arc.
    pub arc_circle: Vec<usize>,
    pub graph: Vec<SeifertArc>,
}

impl SeifertDecomposition {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    /// Crossings met along a circle, in orientation order (each crossing is
    /// reported at the head of the arc entering it).
    pub fn crossings_along(&self, d: &PlanarDiagram, circle: usize) -> Vec<usize> {
        let ends = d.arc_ends();
        self.circles[circle]
            .iter()
            .map(|&a| ends[a as usize].1 .0)
            .collect()
    }
}

pub fn seifert_decompose(d: &PlanarDiagram) -> SeifertDecomposition {
    let ends = d.arc_ends();
    let n = d.arc_count();
    let mut arc_circle = vec![usize::MAX; n];
    let mut circles = Vec::new();
    for start in 0..n {
        if arc_circle[start] != usize::MAX {
            continue;
        }
        let id = circles.len();
        let mut circle = Vec::new();
        let mut a = start as ArcId;
        while arc_circle[a as usize] == usize::MAX {
            arc_circle[a as usize] = id;
            circle.push(a);
            let (ci, s) = ends[a as usize].1;
            let c = &d.crossings()[ci];
            a = c.slots[c.seifert_successor(s)];
        }
        circles.push(circle);
    }
    for _ in 0..d.free_loops() {
        circles.push(Vec::new());
    }
    let graph = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let a = arc_circle[c.slots[0] as usize];
            let b = arc_circle[c.slots[c.over_in()] as usize];
            SeifertArc {
                crossing: i,
                circles: (a.min(b), a.max(b)),
                sign: c.sign,
            }
        })
        .collect();
    SeifertDecomposition {
        circles,
        arc_circle,
        graph,
    }
}

pub fn seifert_circle_count(d: &PlanarDiagram) -> usize {
    seifert_decompose(d).circle_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;

    #[test]
    fn unknot_has_one_circle() {
        assert_eq!(seifert_circle_count(&PlanarDiagram::unknot()), 1);
    }

    #[test]
    fn trefoil_closure_has_two_circles_three_positive_arcs() {
        let d = BraidWord::parse("aaa").unwrap().closure();
        let s = seifert_decompose(&d);
        assert_eq!(s.circle_count(), 2);
        assert_eq!(s.graph.len(), 3);
        for e in &s.graph {
            assert_eq!(e.circles, (0, 1));
            assert_eq!(e.sign, Sign::Positive);
        }
    }

    #[test]
    fn orientation_reversal_keeps_partition() {
        let d = BraidWord::parse("abAbaBA").unwrap().closure();
        let s = seifert_decompose(&d);
        let sr = seifert_decompose(&d.reversed());
        let sets = |x: &SeifertDecomposition| {
            let mut v: Vec<Vec<ArcId>> = x
                .circles
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    c.sort();
                    c
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(sets(&s), sets(&sr));
    }
}
