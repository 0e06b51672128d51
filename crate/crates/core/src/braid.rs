//! Braid words, closures and quasipositive band factorizations.
//!
//! Letters `a, b, ...` stand for the positive generators `s1, s2, ...` and
//! capitals for their inverses. Parentheses may group letters; they are
//! accepted as hints and otherwise ignored.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{ArcId, Crossing, PlanarDiagram, Sign, UnionFind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("unexpected character '{ch}' at position {pos}")]
    Syntax { ch: char, pos: usize },
    #[error("unbalanced parentheses at position {pos}")]
    Unbalanced { pos: usize },
    #[error("generator {index} needs more than {strands} strands")]
    StrandCount { index: u32, strands: u32 },
    #[error("no band factorization of '{residual}'")]
    NoDecomposition { residual: String },
    #[error("closure has {components} components, not a knot")]
    NotAKnot { components: usize },
}

/// One generator `s_index` (1-based) with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Letter {
    pub index: u32,
    pub sign: Sign,
}

impl Letter {
    pub fn pos(index: u32) -> Letter {
        Letter {
            index,
            sign: Sign::Positive,
        }
    }

    pub fn neg(index: u32) -> Letter {
        Letter {
            index,
            sign: Sign::Negative,
        }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            index: self.index,
            sign: self.sign.flip(),
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.sign == Sign::Positive {
            b'a'
        } else {
            b'A'
        };
        (base + (self.index - 1) as u8) as char
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BraidWord {
    pub strands: u32,
    pub letters: Vec<Letter>,
}

fn letters_of(text: &str) -> Result<Vec<Letter>, BraidError> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    for (pos, ch) in text.chars().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(BraidError::Unbalanced { pos });
                }
            }
            'a'..='z' => out.push(Letter::pos(ch as u32 - 'a' as u32 + 1)),
            'A'..='Z' => out.push(Letter::neg(ch as u32 - 'A' as u32 + 1)),
            c if c.is_whitespace() => {}
            _ => return Err(BraidError::Syntax { ch, pos }),
        }
    }
    if depth != 0 {
        return Err(BraidError::Unbalanced {
            pos: text.chars().count(),
        });
    }
    Ok(out)
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<Letter>) -> Result<Self, BraidError> {
        if let Some(l) = letters.iter().find(|l| l.index == 0 || l.index >= strands) {
            return Err(BraidError::StrandCount {
                index: l.index,
                strands,
            });
        }
        Ok(BraidWord {
            strands: strands.max(1),
            letters,
        })
    }

    /// Strand count is one more than the largest generator index.
    pub fn parse(text: &str) -> Result<Self, BraidError> {
        let letters = letters_of(text)?;
        let strands = letters.iter().map(|l| l.index + 1).max().unwrap_or(1);
        Ok(BraidWord { strands, letters })
    }

    pub fn parse_with_strands(text: &str, strands: u32) -> Result<Self, BraidError> {
        BraidWord::new(strands, letters_of(text)?)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn writhe(&self) -> i32 {
        self.letters.iter().map(|l| l.sign.value()).sum()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Cancels adjacent inverse pairs.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord {
            strands: self.strands,
            letters: out,
        }
    }

    /// Closed braid diagram with strands running upwards.
    pub fn closure(&self) -> PlanarDiagram {
        let n = self.strands as usize;
        // raw arc ids: 0..n are the bottom arcs, two more per crossing
        let mut cur: Vec<usize> = (0..n).collect();
        let mut next = n;
        let mut raw = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            let i = l.index as usize - 1;
            let (bl, br) = (cur[i], cur[i + 1]);
            let (tl, tr) = (next, next + 1);
            next += 2;
            let slots = match l.sign {
                Sign::Positive => [br, tr, tl, bl],
                Sign::Negative => [bl, br, tr, tl],
            };
            raw.push((slots, l.sign));
            cur[i] = tl;
            cur[i + 1] = tr;
        }
        let mut uf = UnionFind::new(next);
        let mut free = 0;
        for (p, &c) in cur.iter().enumerate() {
            if c == p {
                free += 1;
            } else {
                uf.union(c, p);
            }
        }
        let mut relabel = std::collections::HashMap::new();
        let crossings = raw
            .into_iter()
            .map(|(slots, sign)| Crossing {
                slots: slots.map(|a| {
                    let r = uf.find(a);
                    let k = relabel.len() as ArcId;
                    *relabel.entry(r).or_insert(k)
                }),
                sign,
            })
            .collect();
        PlanarDiagram::from_parts_unchecked(crossings, free)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// A conjugate `u s_k u^-1` of a positive generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Band {
    pub conjugator: Vec<Letter>,
    pub generator: u32,
}

impl Band {
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = self.conjugator.clone();
        out.push(Letter::pos(self.generator));
        out.extend(self.conjugator.iter().rev().map(|l| l.inverse()));
        out
    }

    pub fn text(&self) -> String {
        self.letters().into_iter().map(Letter::to_char).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QPWord {
    pub word: BraidWord,
    pub bands: Vec<Band>,
}

impl QPWord {
    pub fn parse(text: &str) -> Result<Self, BraidError> {
        Self::from_word(BraidWord::parse(text)?)
    }

    pub fn parse_with_strands(text: &str, strands: u32) -> Result<Self, BraidError> {
        Self::from_word(BraidWord::parse_with_strands(text, strands)?)
    }

    pub fn from_word(word: BraidWord) -> Result<Self, BraidError> {
        let bands = factor_bands(&word.letters).ok_or_else(|| BraidError::NoDecomposition {
            residual: word.to_string(),
        })?;
        Ok(QPWord { word, bands })
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    /// 4-genus of the closure, `(bands - strands + 1) / 2`.
    pub fn qp_genus(&self) -> Result<i32, BraidError> {
        let components = self.word.closure().component_count();
        if components != 1 {
            return Err(BraidError::NotAKnot { components });
        }
        let twice = self.bands.len() as i32 - self.word.strands as i32 + 1;
        debug_assert!(twice % 2 == 0);
        Ok(twice / 2)
    }

    pub fn bands_text(&self) -> String {
        self.bands
            .iter()
            .map(|b| format!("({})", b.text()))
            .collect()
    }
}

/// Factors a word as a product of bands following the grammar
/// `Q := empty | Q Q | positive letter | y Q y^-1`, by interval dynamic
/// programming. The returned bands multiply to the word in the free group.
pub fn factor_bands(w: &[Letter]) -> Option<Vec<Band>> {
    let n = w.len();
    // how[i][j]: derivation of w[i..j]
    #[derive(Clone, Copy)]
    enum How {
        No,
        Empty,
        Single,
        Wrap,
        Split(usize),
    }
    let mut how = vec![vec![How::No; n + 1]; n + 1];
    for (i, row) in how.iter_mut().enumerate() {
        row[i] = How::Empty;
    }
    for len in 1..=n {
        for i in 0..=n - len {
            let j = i + len;
            let h = if len == 1 && w[i].sign == Sign::Positive {
                How::Single
            } else if len >= 2
                && w[j - 1] == w[i].inverse()
                && !matches!(how[i + 1][j - 1], How::No)
            {
                How::Wrap
            } else if let Some(k) = (i + 1..j).find(|&k| {
                !matches!(how[i][k], How::No | How::Empty)
                    && !matches!(how[k][j], How::No | How::Empty)
            }) {
                How::Split(k)
            } else {
                How::No
            };
            how[i][j] = h;
        }
    }
    fn collect(
        how: &[Vec<How>],
        w: &[Letter],
        i: usize,
        j: usize,
        prefix: &mut Vec<Letter>,
        out: &mut Vec<Band>,
    ) {
        match how[i][j] {
            How::Empty | How::No => {}
            How::Single => out.push(Band {
                conjugator: prefix.clone(),
                generator: w[i].index,
            }),
            How::Wrap => {
                prefix.push(w[i]);
                collect(how, w, i + 1, j - 1, prefix, out);
                prefix.pop();
            }
            How::Split(k) => {
                collect(how, w, i, k, prefix, out);
                collect(how, w, k, j, prefix, out);
            }
        }
    }
    if matches!(how[0][n], How::No) {
        return None;
    }
    let mut out = Vec::new();
    collect(&how, w, 0, n, &mut Vec::new(), &mut out);
    Some(out)
}

/// Checks that the given bands are conjugates of positive generators whose
/// product freely reduces to the same word as `word`.
pub fn check_bands(word: &BraidWord, bands: &[Band]) -> bool {
    let prod: Vec<Letter> = bands.iter().flat_map(|b| b.letters()).collect();
    let a = BraidWord {
        strands: word.strands,
        letters: prod,
    }
    .free_reduce();
    a.letters == word.free_reduce().letters
        && bands
            .iter()
            .all(|b| b.generator >= 1 && b.generator < word.strands)
}

/// Embedded band `s_{i,j}` as a word.
pub fn embedded_band(i: u32, j: u32) -> BraidWord {
    assert!(i < j);
    let u: Vec<Letter> = (i..j - 1).map(Letter::pos).collect();
    let band = Band {
        conjugator: u,
        generator: j - 1,
    };
    BraidWord {
        strands: j,
        letters: band.letters(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let w = BraidWord::parse("(abA)b").unwrap();
        assert_eq!(w.strands, 3);
        assert_eq!(w.to_string(), "abAb");
        assert_eq!(w.writhe(), 2);
        assert!(matches!(
            BraidWord::parse("(ab"),
            Err(BraidError::Unbalanced { .. })
        ));
        assert!(matches!(
            BraidWord::parse("a1"),
            Err(BraidError::Syntax { ch: '1', pos: 1 })
        ));
        assert!(BraidWord::parse_with_strands("c", 3).is_err());
    }

    #[test]
    fn closure_counts() {
        let u = BraidWord::parse("").unwrap().closure();
        assert_eq!((u.crossing_count(), u.component_count()), (0, 1));
        let t = BraidWord::parse("aaa").unwrap().closure();
        assert_eq!(
            (t.crossing_count(), t.writhe(), t.component_count()),
            (3, 3, 1)
        );
        t.check_planar().unwrap();
        let h = BraidWord::parse_with_strands("a", 3).unwrap().closure();
        assert_eq!((h.component_count(), h.free_loops()), (2, 1));
    }

    #[test]
    fn closure_is_planar_and_has_strand_many_circles() {
        for w in ["aBaB", "abAbaBA", "abcABCabc", "aCbD"] {
            let b = BraidWord::parse(w).unwrap();
            let d = b.closure();
            d.check_planar().unwrap();
            assert_eq!(
                crate::seifert::seifert_circle_count(&d),
                b.strands as usize,
                "{w}"
            );
        }
    }

    #[test]
    fn bands_of_small_words() {
        let q = QPWord::parse("a").unwrap();
        assert_eq!(q.band_count(), 1);
        assert_eq!(q.qp_genus().unwrap(), 0);
        let q = QPWord::parse("(abA)b(Abba)").unwrap();
        assert_eq!(q.band_count(), 4);
        assert!(check_bands(&q.word, &q.bands));
        assert_eq!(q.qp_genus().unwrap(), 1);
        assert!(matches!(
            QPWord::parse("A"),
            Err(BraidError::NoDecomposition { .. })
        ));
        let q = QPWord::parse("bacB").unwrap();
        assert_eq!(q.bands_text(), "(baB)(bcB)");
    }

    #[test]
    fn embedded_bands_are_single_bands() {
        for j in 2..7 {
            for i in 1..j {
                let w = embedded_band(i, j);
                let q = QPWord::from_word(w).unwrap();
                assert_eq!(q.band_count(), 1, "s_{i},{j}");
            }
        }
    }

    #[test]
    fn not_a_knot_genus() {
        let q = QPWord::parse("aa").unwrap();
        assert_eq!(q.qp_genus(), Err(BraidError::NotAKnot { components: 2 }));
    }
}
