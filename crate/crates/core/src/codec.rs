//! PD text format: `PD[X(a,b,c,d), X(e,f,g,h), ...]`.
//!
//! Arc ids are positive integers, each used by exactly two slots. Orientation
//! is read from the under-strands (slot 1 in, slot 3 out, 1-based); components
//! that never pass under are oriented along increasing labels. Crossing-free
//! circles beyond the single unknot `PD[]` are written as `O(k)` items.

use std::collections::HashMap;

use thiserror::Error;

use crate::diagram::{ArcId, Crossing, DiagramError, PlanarDiagram, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("crossing {crossing} has {found} slots (expected 4)")]
    SlotCount { crossing: usize, found: usize },
    #[error("arc {arc} is used {count} times (expected 2)")]
    ArcUse { arc: u64, count: usize },
    #[error("component through arc {arc} has inconsistent orientation")]
    Orientation { arc: u64 },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

pub fn emit_pd(d: &PlanarDiagram) -> String {
    if d.crossing_count() == 0 && d.free_loops() == 1 {
        return "PD[]".to_string();
    }
    let mut items: Vec<String> = d
        .crossings()
        .iter()
        .map(|c| {
            let s = c.slots.map(|a| a + 1);
            format!("X({},{},{},{})", s[0], s[1], s[2], s[3])
        })
        .collect();
    let base = d.arc_count() as u32;
    for k in 0..d.free_loops() {
        items.push(format!("O({})", base + k + 1));
    }
    format!("PD[{}]", items.join(", "))
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn location(&self) -> (usize, usize) {
        let before = &self.text[..self.pos];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let col = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        (line, col)
    }

    fn error(&self, message: impl Into<String>) -> PdError {
        let (line, column) = self.location();
        PdError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), PdError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", b as char)))
        }
    }

    fn number(&mut self) -> Result<u64, PdError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected arc id"));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        let v: u64 = s.parse().map_err(|_| self.error("arc id out of range"))?;
        if v == 0 {
            self.pos = start;
            return Err(self.error("arc ids must be positive"));
        }
        Ok(v)
    }
}

struct RawPd {
    crossings: Vec<[u64; 4]>,
    loops: u32,
}

fn parse_raw(text: &str) -> Result<RawPd, PdError> {
    let mut cur = Cursor {
        text: text.as_bytes(),
        pos: 0,
    };
    cur.expect(b'P')?;
    cur.expect(b'D')?;
    cur.expect(b'[')?;
    let mut crossings = Vec::new();
    let mut loops = 0u32;
    if cur.peek() == Some(b']') {
        cur.pos += 1;
    } else {
        loop {
            match cur.peek() {
                Some(b'X') => {
                    cur.pos += 1;
                    cur.expect(b'(')?;
                    let mut vals = vec![cur.number()?];
                    while cur.peek() == Some(b',') {
                        cur.pos += 1;
                        vals.push(cur.number()?);
                    }
                    cur.expect(b')')?;
                    if vals.len() != 4 {
                        return Err(PdError::SlotCount {
                            crossing: crossings.len() + 1,
                            found: vals.len(),
                        });
                    }
                    crossings.push([vals[0], vals[1], vals[2], vals[3]]);
                }
                Some(b'O') => {
                    cur.pos += 1;
                    cur.expect(b'(')?;
                    cur.number()?;
                    cur.expect(b')')?;
                    loops += 1;
                }
                _ => return Err(cur.error("expected X(...) or O(...)")),
            }
            match cur.peek() {
                Some(b',') => cur.pos += 1,
                Some(b']') => {
                    cur.pos += 1;
                    break;
                }
                _ => return Err(cur.error("expected ',' or ']'")),
            }
        }
    }
    if cur.peek().is_some() {
        return Err(cur.error("trailing input"));
    }
    if crossings.is_empty() && loops == 0 {
        loops = 1;
    }
    Ok(RawPd { crossings, loops })
}

/// Parses one PD code. Planarity is not checked; see [`parse_pd_strict`].
pub fn parse_pd(text: &str) -> Result<PlanarDiagram, PdError> {
    let raw = parse_raw(text)?;
    build(raw)
}

pub fn parse_pd_strict(text: &str) -> Result<PlanarDiagram, PdError> {
    let d = parse_pd(text)?;
    d.check_planar()?;
    Ok(d)
}

/// One diagram per non-empty, non-comment line.
pub fn parse_pd_lines(text: &str) -> Result<Vec<PlanarDiagram>, PdError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(parse_pd(t).map_err(|e| match e {
            PdError::Syntax {
                column, message, ..
            } => PdError::Syntax {
                line: i + 1,
                column,
                message,
            },
            other => other,
        })?);
    }
    Ok(out)
}

fn build(raw: RawPd) -> Result<PlanarDiagram, PdError> {
    let mut uses: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
    for (ci, c) in raw.crossings.iter().enumerate() {
        for (s, &a) in c.iter().enumerate() {
            uses.entry(a).or_default().push((ci, s));
        }
    }
    let mut labels: Vec<u64> = uses.keys().copied().collect();
    labels.sort_unstable();
    for &a in &labels {
        let n = uses[&a].len();
        if n != 2 {
            return Err(PdError::ArcUse { arc: a, count: n });
        }
    }
    let consecutive = labels.iter().enumerate().all(|(i, &a)| a == i as u64 + 1);
    let index: HashMap<u64, ArcId> = if consecutive {
        labels.iter().map(|&a| (a, (a - 1) as ArcId)).collect()
    } else {
        labels
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i as ArcId))
            .collect()
    };

    // incoming[c][s] after orientation is fixed
    let mut incoming: Vec<[Option<bool>; 4]> = vec![[None; 4]; raw.crossings.len()];
    for ci in 0..raw.crossings.len() {
        for s in 0..4 {
            if incoming[ci][s].is_some() {
                continue;
            }
            // walk the component entering at (ci, s)
            let mut entries = Vec::new();
            let mut at = (ci, s);
            loop {
                entries.push(at);
                let exit = (at.0, (at.1 + 2) % 4);
                let label = raw.crossings[exit.0][exit.1];
                let other = uses[&label].iter().copied().find(|&u| u != exit).unwrap();
                at = other;
                if at == (ci, s) {
                    break;
                }
                if entries.len() > 4 * raw.crossings.len() {
                    break;
                }
            }
            let mut vote: Option<bool> = None;
            for &(c, sl) in &entries {
                let v = match sl {
                    0 => Some(true),
                    2 => Some(false),
                    _ => None,
                };
                if let Some(v) = v {
                    if vote.is_some_and(|w| w != v) {
                        return Err(PdError::Orientation {
                            arc: raw.crossings[c][sl],
                        });
                    }
                    vote = Some(v);
                }
            }
            let forward = vote.unwrap_or_else(|| {
                // over-only component: follow increasing labels
                let (mut up, mut down) = (0, 0);
                for &(c, sl) in &entries {
                    let a = raw.crossings[c][sl];
                    let b = raw.crossings[c][(sl + 2) % 4];
                    if b == a + 1 {
                        up += 1;
                    } else if a == b + 1 {
                        down += 1;
                    }
                }
                up >= down
            });
            for &(c, sl) in &entries {
                incoming[c][sl] = Some(forward);
                incoming[c][(sl + 2) % 4] = Some(!forward);
            }
        }
    }

    let mut crossings = Vec::with_capacity(raw.crossings.len());
    for (ci, c) in raw.crossings.iter().enumerate() {
        let sign = if incoming[ci][3] == Some(true) {
            Sign::Positive
        } else {
            Sign::Negative
        };
        crossings.push(Crossing {
            slots: c.map(|a| index[&a]),
            sign,
        });
    }
    Ok(PlanarDiagram::new(crossings, raw.loops)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;

    #[test]
    fn unknot_round_trip() {
        let u = PlanarDiagram::unknot();
        assert_eq!(emit_pd(&u), "PD[]");
        let p = parse_pd("PD[]").unwrap();
        assert_eq!(p, u);
        assert_eq!(p.component_count(), 1);
    }

    #[test]
    fn trefoil_round_trip() {
        let t = BraidWord::parse("aaa").unwrap().closure();
        assert_eq!(parse_pd(&emit_pd(&t)).unwrap(), t);
    }

    #[test]
    fn knotinfo_trefoil_is_positive() {
        let t = parse_pd("PD[X(1,5,2,4), X(3,1,4,6), X(5,3,6,2)]").unwrap();
        assert_eq!(t.writhe(), 3);
        let m = parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
        assert_eq!(m.writhe(), -3);
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_pd("PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]").unwrap();
        let b = parse_pd(" PD [ X( 1 , 5,2,4 ) ,\n X(3,1,4,6), X(5,3,6,2) ] ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn slot_count_error_names_crossing() {
        let e = parse_pd("PD[X(1,5,2,4), X(3,1,4), X(5,3,6,2)]").unwrap_err();
        assert_eq!(
            e,
            PdError::SlotCount {
                crossing: 2,
                found: 3
            }
        );
    }

    #[test]
    fn syntax_error_has_location() {
        let e = parse_pd("PD[X(1,5,2,4),\n  Y(3,1,4,6)]").unwrap_err();
        assert!(
            matches!(
                e,
                PdError::Syntax {
                    line: 2,
                    column: 3,
                    ..
                }
            ),
            "{e:?}"
        );
    }

    #[test]
    fn arc_used_three_times_rejected() {
        let e = parse_pd("PD[X(1,1,2,2), X(1,3,4,3)]").unwrap_err();
        assert!(matches!(e, PdError::ArcUse { arc: 1, count: 3 }));
    }

    #[test]
    fn inconsistent_orientation_rejected() {
        // arc 1 enters both crossings as an under-strand
        let e = parse_pd("PD[X(1,3,2,4), X(1,4,2,3)]").unwrap_err();
        assert!(
            matches!(e, PdError::Orientation { .. } | PdError::Diagram(_)),
            "{e:?}"
        );
    }

    #[test]
    fn free_loops_round_trip() {
        let d = BraidWord::parse("aaa").unwrap().closure();
        let split = d.smooth_crossing(0).smooth_crossing(0).smooth_crossing(0);
        assert_eq!(split.crossing_count(), 0);
        let text = emit_pd(&split);
        assert_eq!(parse_pd(&text).unwrap(), split);
    }

    #[test]
    fn strict_mode_checks_planarity() {
        let t = "PD[X(1,5,2,4), X(3,1,4,6), X(5,3,6,2)]";
        assert!(parse_pd_strict(t).is_ok());
    }

    #[test]
    fn batch_lines() {
        let ds =
            parse_pd_lines("# comment\nPD[]\n\nPD[X(1,5,2,4), X(3,1,4,6), X(5,3,6,2)]\n").unwrap();
        assert_eq!(ds.len(), 2);
    }
}
