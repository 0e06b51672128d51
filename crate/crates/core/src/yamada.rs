//! Braiding a diagram without changing writhe or Seifert circle count.
//!
//! While some face carries two edges of different Seifert circles that run
//! the same way around it, one edge is pushed across the other by a
//! Reidemeister II move. The new crossings have opposite signs and the
//! Seifert circles are only rerouted, never merged or created. Once no such
//! face is left the circles are concentric and coherent, and the braid word
//! is read off level by level.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::braid::{check_bands, Band, BraidError, BraidWord, Letter, QPWord};
use crate::cert::{check_pairing, Pairing};
use crate::diagram::{ArcId, Crossing, PlanarDiagram, Sign};
use crate::homfly::{HomflyEngine, HomflyError};
use crate::seifert::seifert_decompose;

pub const DEFAULT_BRAID_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum YamadaError {
    #[error("diagram has {crossings} crossings, above the braiding cap {cap}")]
    TooManyCrossings { crossings: usize, cap: usize },
    #[error("braiding did not settle after {moves} moves")]
    NoProgress { moves: usize },
    #[error("Seifert circles are not concentric: {0}")]
    NotConcentric(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("no band factorization of the braided word '{0}'")]
    NoBands(String),
    #[error("braided closure does not match the diagram")]
    Mismatch,
    #[error(transparent)]
    Homfly(#[from] HomflyError),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

pub fn yamada_braid(d: &PlanarDiagram) -> Result<BraidWord, YamadaError> {
    yamada_braid_with_cap(d, DEFAULT_BRAID_CAP)
}

/// The cap bounds the input crossing count. Strand count of the result is
/// the number of Seifert circles of `d` and its exponent sum is the writhe.
pub fn yamada_braid_with_cap(d: &PlanarDiagram, cap: usize) -> Result<BraidWord, YamadaError> {
    Ok(braid_tracked(d, cap)?.0)
}

/// Where a letter of the braided word comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Source {
    Crossing(usize),
    /// Pair added by a push, with the positive member first.
    Push(usize, bool),
}

fn braid_tracked(d: &PlanarDiagram, cap: usize) -> Result<(BraidWord, Vec<Source>), YamadaError> {
    if d.crossing_count() > cap {
        return Err(YamadaError::TooManyCrossings {
            crossings: d.crossing_count(),
            cap,
        });
    }
    let mut strands = d.free_loops();
    let mut letters = Vec::new();
    let mut sources = Vec::new();
    let mut pushes = 0;
    for piece in d.pieces() {
        let sub = d.sub_diagram(&piece);
        let (braided, ids) = braid_connected(&sub)?;
        letters.extend(braided.letters.iter().map(|l| Letter {
            index: l.index + strands,
            sign: l.sign,
        }));
        sources.extend(ids.into_iter().map(|x| {
            if x < piece.len() {
                Source::Crossing(piece[x])
            } else {
                let k = x - piece.len();
                Source::Push(pushes + k / 2, k % 2 == 0)
            }
        }));
        pushes += (braided.letters.len() - piece.len()) / 2;
        strands += braided.strands;
    }
    Ok((
        BraidWord {
            strands: strands.max(1),
            letters,
        },
        sources,
    ))
}

/// Braid word plus the crossing of the final diagram behind each letter.
/// Crossings added by pushes are numbered after the original ones.
fn braid_connected(d: &PlanarDiagram) -> Result<(BraidWord, Vec<usize>), YamadaError> {
    let s = seifert_decompose(d).circle_count();
    let limit = 4 * s * s + 4 * d.crossing_count() + 16;
    let mut cur = d.clone();
    let mut moves = 0;
    while let Some((e1, e2)) = defect(&cur) {
        cur = push_across(&cur, e1, e2);
        debug_assert_eq!(seifert_decompose(&cur).circle_count(), s);
        moves += 1;
        if moves > limit {
            return Err(YamadaError::NoProgress { moves });
        }
    }
    read_braid(&cur)
}

/// First face with two same-direction darts on different Seifert circles.
fn defect(d: &PlanarDiagram) -> Option<(usize, usize)> {
    let sd = seifert_decompose(d);
    for face in d.faces() {
        for (i, &x) in face.iter().enumerate() {
            for &y in &face[i + 1..] {
                if x % 2 == y % 2 && sd.arc_circle[x / 2] != sd.arc_circle[y / 2] {
                    return Some((x, y));
                }
            }
        }
    }
    None
}

/// Reidemeister II move pushing dart `e1` over dart `e2` inside their
/// common face. Both darts run the same way along the face boundary.
fn push_across(d: &PlanarDiagram, e1: usize, e2: usize) -> PlanarDiagram {
    let forward = e1.is_multiple_of(2);
    let (a1, a2) = ((e1 / 2) as ArcId, (e2 / 2) as ArcId);
    let ends = d.arc_ends();
    let mut crossings: Vec<Crossing> = d.crossings().to_vec();
    let next = d.arc_count() as ArcId;
    let (m1, h1, m2, h2) = (next, next + 1, next + 2, next + 3);
    // the head end of each arc now receives the head piece
    let (hc1, hs1) = ends[a1 as usize].1;
    crossings[hc1].slots[hs1] = h1;
    let (hc2, hs2) = ends[a2 as usize].1;
    crossings[hc2].slots[hs2] = h2;
    // pieces in face order: p1 p2 p3 along e1, q1 q2 q3 along e2
    let (p1, p2, p3, q1, q2, q3) = if forward {
        (a1, m1, h1, a2, m2, h2)
    } else {
        (h1, m1, a1, h2, m2, a2)
    };
    let (right, left) = if forward {
        ([q2, p2, q3, p1], [q1, p2, q2, p3])
    } else {
        ([q3, p1, q2, p2], [q2, p3, q1, p2])
    };
    crossings.push(Crossing {
        slots: right,
        sign: Sign::Positive,
    });
    crossings.push(Crossing {
        slots: left,
        sign: Sign::Negative,
    });
    let out = PlanarDiagram::from_parts_unchecked(crossings, d.free_loops());
    debug_assert!(out.check_planar().is_ok());
    out
}

/// Reads the braid word of a diagram whose Seifert circles are nested and
/// coherently oriented, with the Seifert graph a path.
fn read_braid(d: &PlanarDiagram) -> Result<(BraidWord, Vec<usize>), YamadaError> {
    let sd = seifert_decompose(d);
    let n = sd.circle_count();
    if d.crossing_count() == 0 {
        return Ok((
            BraidWord {
                strands: n.max(1) as u32,
                letters: Vec::new(),
            },
            Vec::new(),
        ));
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for e in &sd.graph {
        adj[e.circles.0].insert(e.circles.1);
        adj[e.circles.1].insert(e.circles.0);
    }
    let Some(first) = (0..n).find(|&c| adj[c].len() <= 1) else {
        return Err(YamadaError::NotConcentric(
            "Seifert graph has a cycle".into(),
        ));
    };
    let mut levels = vec![first];
    let mut prev = usize::MAX;
    let mut cur = first;
    while let Some(&nx) = adj[cur].iter().find(|&&c| c != prev) {
        if adj[cur].len() > 2 || (prev == usize::MAX && adj[cur].len() > 1) {
            return Err(YamadaError::NotConcentric("Seifert graph branches".into()));
        }
        levels.push(nx);
        prev = cur;
        cur = nx;
    }
    if levels.len() != n {
        return Err(YamadaError::NotConcentric(
            "Seifert graph is not a path".into(),
        ));
    }
    let level_of: HashMap<usize, usize> = levels.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    // cut every circle just before the first crossing shared with the level below
    let mut chains: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut start = None;
    for (lvl, &c) in levels.iter().enumerate() {
        let mut along = sd.crossings_along(d, c);
        if let Some(x) = start {
            let k = along
                .iter()
                .position(|&y| y == x)
                .expect("shared crossing lies on both circles");
            along.rotate_left(k);
        }
        start = along.iter().copied().find(|&x| {
            let (a, b) = sd.graph[x].circles;
            let other = if a == c { b } else { a };
            level_of[&other] == lvl + 1
        });
        chains.push(along);
    }

    // merge the chains; crossings on no common circle commute
    let m = d.crossing_count();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut indeg = vec![0usize; m];
    for chain in &chains {
        for w in chain.windows(2) {
            succ[w[0]].push(w[1]);
            indeg[w[1]] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..m).filter(|&x| indeg[x] == 0).collect();
    let mut letters = Vec::with_capacity(m);
    let mut ids = Vec::with_capacity(m);
    while let Some(x) = ready.pop_first() {
        ids.push(x);
        let (a, b) = sd.graph[x].circles;
        let index = level_of[&a].min(level_of[&b]) as u32 + 1;
        letters.push(Letter {
            index,
            sign: d.crossings()[x].sign,
        });
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.insert(y);
            }
        }
    }
    if letters.len() != m {
        return Err(YamadaError::NotConcentric(
            "circle orders are inconsistent".into(),
        ));
    }
    Ok((
        BraidWord {
            strands: n as u32,
            letters,
        },
        ids,
    ))
}

/// Braids a diagram carrying a quasipositivity certificate and writes the
/// result as a product of positive bands. Experimental: pairs of the
/// certificate and pairs created by the braiding are cancelled by moving
/// one member next to the other through conjugation, and the result is
/// checked against the diagram.
pub fn qp_diagram_to_braid(
    d: &PlanarDiagram,
    cert: &Pairing,
    engine: &HomflyEngine,
) -> Result<QPWord, YamadaError> {
    check_pairing(d, cert).map_err(|v| YamadaError::Certificate(v.to_string()))?;
    let (word, sources) = braid_tracked(d, DEFAULT_BRAID_CAP)?;
    let mut partner: HashMap<usize, usize> = HashMap::new();
    for &(p, n) in &cert.pairs {
        partner.insert(p, n);
        partner.insert(n, p);
    }
    let mut key = vec![None; word.letters.len()];
    let mut at: HashMap<Source, usize> = HashMap::new();
    for (i, s) in sources.iter().enumerate() {
        at.insert(*s, i);
    }
    let mut pairs = Vec::new();
    for (i, s) in sources.iter().enumerate() {
        let other = match *s {
            Source::Crossing(x) => partner.get(&x).map(|&y| at[&Source::Crossing(y)]),
            Source::Push(k, pos) => Some(at[&Source::Push(k, !pos)]),
        };
        if let Some(j) = other {
            if i < j {
                key[i] = Some(pairs.len());
                key[j] = Some(pairs.len());
                pairs.push((i, j));
            }
        }
    }
    let bands = cancel_pairs(&word.letters, &key, pairs.len())
        .ok_or_else(|| YamadaError::NoBands(word.to_string()))?;
    let letters: Vec<Letter> = bands.iter().flat_map(|b| b.letters()).collect();
    let out = BraidWord {
        strands: word.strands,
        letters,
    };
    debug_assert!(check_bands(&out, &bands));
    if engine.homfly(&out.free_reduce().closure())? != engine.homfly(d)? {
        return Err(YamadaError::Mismatch);
    }
    Ok(QPWord { word: out, bands })
}

/// A conjugate `conj x conj^-1` of one letter, tagged with its pair.
#[derive(Clone, Debug)]
struct Elem {
    conj: Vec<Letter>,
    letter: Letter,
    pair: Option<usize>,
}

impl Elem {
    fn word(&self) -> Vec<Letter> {
        let mut out = self.conj.clone();
        out.push(self.letter);
        out.extend(self.conj.iter().rev().map(|l| l.inverse()));
        out
    }

    fn inverse_word(&self) -> Vec<Letter> {
        let mut out = self.conj.clone();
        out.push(self.letter.inverse());
        out.extend(self.conj.iter().rev().map(|l| l.inverse()));
        out
    }

    /// `g self g^-1`.
    fn conjugated(&self, g: &[Letter]) -> Elem {
        let mut conj = g.to_vec();
        conj.extend_from_slice(&self.conj);
        let mut conj = reduce(conj);
        // trailing letters that commute with the core letter drop out
        while conj.last().is_some_and(|l| {
            l.index == self.letter.index || l.index.abs_diff(self.letter.index) >= 2
        }) {
            conj.pop();
        }
        Elem {
            conj,
            ..self.clone()
        }
    }
}

fn reduce(w: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Cancels every tagged pair, innermost first, then returns the remaining
/// elements as bands if all of them are positive.
fn cancel_pairs(letters: &[Letter], key: &[Option<usize>], pairs: usize) -> Option<Vec<Band>> {
    let mut elems: Vec<Elem> = letters
        .iter()
        .zip(key)
        .map(|(&l, &k)| Elem {
            conj: Vec::new(),
            letter: l,
            pair: k,
        })
        .collect();
    for _ in 0..pairs {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..elems.len() {
            let Some(k) = elems[i].pair else { continue };
            let Some(j) = (i + 1..elems.len()).find(|&j| elems[j].pair == Some(k)) else {
                continue;
            };
            if best.is_none_or(|(a, b)| j - i < b - a) {
                best = Some((i, j));
            }
        }
        let (i, j) = best?;
        let left = move_left(&elems, i, j);
        let right = move_right(&elems, i, j);
        elems = [left, right].into_iter().flatten().next()?;
    }
    elems
        .into_iter()
        .map(|e| {
            (e.letter.sign == Sign::Positive).then_some(Band {
                conjugator: e.conj,
                generator: e.letter.index,
            })
        })
        .collect()
}

/// Moves element `j` leftwards next to `i` and cancels both.
fn move_left(elems: &[Elem], i: usize, j: usize) -> Option<Vec<Elem>> {
    let x = &elems[j];
    let inv = x.inverse_word();
    let mut out: Vec<Elem> = elems[..i].to_vec();
    let middle: Vec<Elem> = elems[i + 1..j].iter().map(|y| y.conjugated(&inv)).collect();
    cancels(&elems[i], x)?;
    out.extend(middle);
    out.extend_from_slice(&elems[j + 1..]);
    Some(out)
}

/// Moves element `i` rightwards next to `j` and cancels both.
fn move_right(elems: &[Elem], i: usize, j: usize) -> Option<Vec<Elem>> {
    let x = &elems[i];
    let w = x.word();
    let mut out: Vec<Elem> = elems[..i].to_vec();
    out.extend(elems[i + 1..j].iter().map(|y| y.conjugated(&w)));
    cancels(x, &elems[j])?;
    out.extend_from_slice(&elems[j + 1..]);
    Some(out)
}

fn cancels(a: &Elem, b: &Elem) -> Option<()> {
    let mut w = a.word();
    w.extend(b.word());
    reduce(w).is_empty().then_some(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_pd;
    use crate::seifert::seifert_circle_count;

    fn check(d: &PlanarDiagram) -> BraidWord {
        let b = yamada_braid(d).unwrap();
        assert_eq!(b.writhe(), d.writhe());
        assert_eq!(b.strands as usize, seifert_circle_count(d));
        let e = HomflyEngine::new();
        assert_eq!(e.homfly(&b.closure()).unwrap(), e.homfly(d).unwrap());
        b
    }

    #[test]
    fn braid_closure_is_fixed() {
        let b = check(&BraidWord::parse("aaa").unwrap().closure());
        assert_eq!(b.strands, 2);
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn figure_eight_needs_three_strands() {
        let d = parse_pd("PD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]").unwrap();
        let b = check(&d);
        assert_eq!(b.strands, 3);
        assert_eq!(b.writhe(), 0);
    }

    #[test]
    fn unknot_and_unlink() {
        assert_eq!(yamada_braid(&PlanarDiagram::unknot()).unwrap().strands, 1);
        assert_eq!(yamada_braid(&PlanarDiagram::unlink(3)).unwrap().strands, 3);
    }

    #[test]
    fn trivial_certificate_gives_positive_word() {
        let d = BraidWord::parse("aaa").unwrap().closure();
        let cert = Pairing {
            singles: vec![0, 1, 2],
            pairs: vec![],
        };
        let q = qp_diagram_to_braid(&d, &cert, &HomflyEngine::new()).unwrap();
        assert_eq!(q.band_count(), 3);
    }

    #[test]
    fn cancelling_pair_gives_no_bands() {
        let d = BraidWord::parse("aA").unwrap().closure();
        let cert = crate::cert::find_certificate(&d).unwrap().unwrap();
        let q = qp_diagram_to_braid(&d, &cert, &HomflyEngine::new()).unwrap();
        assert_eq!(q.band_count(), 0);
    }
}
