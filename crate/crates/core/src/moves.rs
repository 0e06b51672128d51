//! Reidemeister I/II reductions on PD diagrams.

use crate::diagram::{Crossing, PlanarDiagram};

/// Index of a crossing carrying a kink (one arc on two adjacent slots).
pub(crate) fn find_kink(d: &PlanarDiagram) -> Option<usize> {
    d.crossings()
        .iter()
        .position(|c| (0..4).any(|s| c.slots[s] == c.slots[(s + 1) % 4]))
}

pub(crate) fn remove_kink(d: &PlanarDiagram, idx: usize) -> PlanarDiagram {
    let c = d.crossings()[idx];
    d.rewire(
        &[idx],
        &[(c.slots[0], c.slots[2]), (c.slots[1], c.slots[3])],
    )
}

/// A bigon whose two sides are an over-arc and an under-arc.
pub(crate) fn find_bigon(d: &PlanarDiagram) -> Option<(usize, usize)> {
    let ends = d.arc_ends();
    let cs = d.crossings();
    for &((x1, s), (x2, t)) in &ends {
        if x1 == x2 || Crossing::is_over(s) != Crossing::is_over(t) {
            continue;
        }
        for dt in [3usize, 1] {
            let t2 = (t + dt) % 4;
            let b = cs[x2].slots[t2] as usize;
            let (tail, head) = ends[b];
            let other = if tail == (x2, t2) {
                head
            } else if head == (x2, t2) {
                tail
            } else {
                continue;
            };
            if other.0 == x1 && (other.1 + dt) % 4 == s {
                return Some((x1, x2));
            }
        }
    }
    None
}

pub(crate) fn remove_bigon(d: &PlanarDiagram, x1: usize, x2: usize) -> PlanarDiagram {
    let (c1, c2) = (d.crossings()[x1], d.crossings()[x2]);
    d.rewire(
        &[x1, x2],
        &[
            (c1.slots[0], c1.slots[2]),
            (c1.slots[1], c1.slots[3]),
            (c2.slots[0], c2.slots[2]),
            (c2.slots[1], c2.slots[3]),
        ],
    )
}

/// Removes kinks and reducible bigons until none remain.
pub fn simplify(d: &PlanarDiagram) -> PlanarDiagram {
    let mut cur = d.clone();
    loop {
        if let Some(i) = find_kink(&cur) {
            cur = remove_kink(&cur, i);
            continue;
        }
        if let Some((a, b)) = find_bigon(&cur) {
            cur = remove_bigon(&cur, a, b);
            continue;
        }
        return cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;

    #[test]
    fn cancelling_letters_reduce() {
        let d = BraidWord::parse("abBa").unwrap().closure();
        let s = simplify(&d);
        // closure of aa on 3 strands after removing the bB bigon: Hopf link plus a loop
        assert_eq!(s.crossing_count(), 2);
        assert_eq!(s.free_loops(), 1);
    }

    #[test]
    fn one_crossing_unknot_collapses() {
        let d = BraidWord::parse("a").unwrap().closure();
        let s = simplify(&d);
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.free_loops(), 1);
    }

    #[test]
    fn clasp_is_not_a_bigon_move() {
        let d = BraidWord::parse("aa").unwrap().closure();
        assert_eq!(simplify(&d).crossing_count(), 2);
        let t = BraidWord::parse("aaa").unwrap().closure();
        assert_eq!(simplify(&t).crossing_count(), 3);
    }
}
