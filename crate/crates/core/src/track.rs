//! Labelled immersed intervals on the integer grid and their track diagrams.
//!
//! An interval is a lattice path. Its double points carry one of eleven sign
//! patterns on the four surrounding quadrants; marked points on unit segments
//! carry full positive twists. The diagram is the boundary of a thin band
//! around the path, oriented clockwise with respect to the band, with a
//! 2x2 block of crossings at every double point and two crossings per mark.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{ArcId, Crossing, PlanarDiagram, Sign, UnionFind};
use crate::seifert::seifert_circle_count;

type V2 = (i32, i32);

fn add(a: V2, b: V2) -> V2 {
    (a.0 + b.0, a.1 + b.1)
}

fn scale(k: i32, a: V2) -> V2 {
    (k * a.0, k * a.1)
}

fn dot(a: V2, b: V2) -> i32 {
    a.0 * b.0 + a.1 * b.1
}

fn cross(a: V2, b: V2) -> i32 {
    a.0 * b.1 - a.1 * b.0
}

/// Left normal: the direction rotated by a quarter turn counterclockwise.
fn left(a: V2) -> V2 {
    (-a.1, a.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Move {
    U,
    D,
    L,
    R,
}

impl Move {
    pub fn delta(self) -> V2 {
        match self {
            Move::U => (0, 1),
            Move::D => (0, -1),
            Move::L => (-1, 0),
            Move::R => (1, 0),
        }
    }

    pub fn opposite(self) -> Move {
        match self {
            Move::U => Move::D,
            Move::D => Move::U,
            Move::L => Move::R,
            Move::R => Move::L,
        }
    }

    fn from_char(c: char) -> Option<Move> {
        Some(match c {
            'U' => Move::U,
            'D' => Move::D,
            'L' => Move::L,
            'R' => Move::R,
            _ => return None,
        })
    }

    fn to_char(self) -> char {
        match self {
            Move::U => 'U',
            Move::D => 'D',
            Move::L => 'L',
            Move::R => 'R',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GridPath {
    pub moves: Vec<Move>,
    pub start: (i32, i32),
}

impl GridPath {
    pub fn new(moves: Vec<Move>) -> Self {
        GridPath {
            moves,
            start: (0, 0),
        }
    }

    pub fn parse(word: &str) -> Result<Self, TrackError> {
        let moves = word
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                Move::from_char(c).ok_or(TrackError::Syntax {
                    line: 0,
                    message: format!("unknown move '{c}'"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GridPath::new(moves))
    }

    pub fn word(&self) -> String {
        self.moves.iter().map(|m| m.to_char()).collect()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Lattice points `p_0 .. p_m`.
    pub fn points(&self) -> Vec<V2> {
        let mut p = self.start;
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        out.push(p);
        for m in &self.moves {
            p = add(p, m.delta());
            out.push(p);
        }
        out
    }

    pub fn reversed(&self) -> GridPath {
        let end = *self.points().last().unwrap();
        GridPath {
            moves: self.moves.iter().rev().map(|m| m.opposite()).collect(),
            start: end,
        }
    }
}

impl fmt::Display for GridPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PatternType {
    A,
    B,
    C,
    D,
}

/// One of the eleven symbols `a, a1, b, b1, b2, b3, c, c1, c2, c3, d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DoublePointLabel {
    pub kind: PatternType,
    pub rotation: u8,
}

impl DoublePointLabel {
    /// All symbols in lexicographic order.
    pub const ALL: [DoublePointLabel; 11] = [
        DoublePointLabel {
            kind: PatternType::A,
            rotation: 0,
        },
        DoublePointLabel {
            kind: PatternType::A,
            rotation: 1,
        },
        DoublePointLabel {
            kind: PatternType::B,
            rotation: 0,
        },
        DoublePointLabel {
            kind: PatternType::B,
            rotation: 1,
        },
        DoublePointLabel {
            kind: PatternType::B,
            rotation: 2,
        },
        DoublePointLabel {
            kind: PatternType::B,
            rotation: 3,
        },
        DoublePointLabel {
            kind: PatternType::C,
            rotation: 0,
        },
        DoublePointLabel {
            kind: PatternType::C,
            rotation: 1,
        },
        DoublePointLabel {
            kind: PatternType::C,
            rotation: 2,
        },
        DoublePointLabel {
            kind: PatternType::C,
            rotation: 3,
        },
        DoublePointLabel {
            kind: PatternType::D,
            rotation: 0,
        },
    ];

    pub fn new(kind: PatternType, rotation: u8) -> Self {
        let period = match kind {
            PatternType::A => 2,
            PatternType::D => 1,
            _ => 4,
        };
        DoublePointLabel {
            kind,
            rotation: rotation % period,
        }
    }

    /// Signs on quadrants `0..4` (counterclockwise) under a convention.
    pub fn quadrant_signs(self, conv: &Convention) -> [Sign; 4] {
        let base = |q: u8| -> bool {
            // true for a minus sign
            match self.kind {
                PatternType::D => false,
                PatternType::C => q == conv.c_minus,
                PatternType::B => q == conv.b_minus || q == (conv.b_minus + 1) % 4,
                PatternType::A => q % 2 == conv.a_minus % 2,
            }
        };
        let mut out = [Sign::Positive; 4];
        for (q, s) in out.iter_mut().enumerate() {
            if base((q as u8 + 4 - self.rotation) % 4) {
                *s = Sign::Negative;
            }
        }
        out
    }

    pub fn sign_sum(self) -> i32 {
        match self.kind {
            PatternType::A | PatternType::B => 0,
            PatternType::C => 2,
            PatternType::D => 4,
        }
    }
}

impl fmt::Display for DoublePointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            PatternType::A => 'a',
            PatternType::B => 'b',
            PatternType::C => 'c',
            PatternType::D => 'd',
        };
        if self.rotation == 0 {
            write!(f, "{c}")
        } else {
            write!(f, "{c}{}", self.rotation)
        }
    }
}

impl FromStr for DoublePointLabel {
    type Err = TrackError;

    fn from_str(s: &str) -> Result<Self, TrackError> {
        let s = s.trim();
        DoublePointLabel::ALL
            .iter()
            .copied()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| TrackError::Syntax {
                line: 0,
                message: format!("unknown symbol '{s}'"),
            })
    }
}

/// Where quadrant 0 sits and where the minus signs of the base patterns are.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Convention {
    pub anchor: Anchor,
    pub c_minus: u8,
    pub b_minus: u8,
    pub a_minus: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Anchor {
    /// Quadrant 0 is the north-east region of the plane.
    Absolute,
    /// Quadrant 0 lies ahead on the earlier pass and behind on the later one.
    Relative,
}

impl Convention {
    /// Calibrated so that the two-point interval in `fixtures/fig17.track`
    /// reproduces the reference table.
    pub const CALIBRATED: Convention = Convention {
        anchor: Anchor::Relative,
        c_minus: 0,
        b_minus: 0,
        a_minus: 0,
    };
}

impl Default for Convention {
    fn default() -> Self {
        Convention::CALIBRATED
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MarkedPoint {
    /// Unit segment from `p_step` to `p_step+1`.
    pub step: usize,
    /// Ordinal among marks sharing a segment.
    pub offset: u32,
}

impl MarkedPoint {
    pub fn at(step: usize) -> Self {
        MarkedPoint { step, offset: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LabelledInterval {
    pub path: GridPath,
    pub labels: Vec<DoublePointLabel>,
    pub marks: Vec<MarkedPoint>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrackError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid interval: {0}")]
    Invalid(Diagnostics),
    #[error("construction check failed: {0}")]
    Postcondition(String),
    #[error("cannot glue: {0}")]
    Glue(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Violation {
    RepeatedSegment { step: usize },
    TripleVisit { point: V2 },
    EndpointOnCurve { point: V2 },
    NotTransverse { point: V2 },
    LabelCount { expected: usize, found: usize },
    MarkOutOfRange { step: usize },
    DuplicateMark { step: usize, offset: u32 },
    CycleNotBroken,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RepeatedSegment { step } => {
                write!(f, "segment {step} runs over an earlier segment")
            }
            Violation::TripleVisit { point } => {
                write!(f, "point {point:?} is visited three or more times")
            }
            Violation::EndpointOnCurve { point } => {
                write!(f, "end point {point:?} lies on the curve")
            }
            Violation::NotTransverse { point } => {
                write!(f, "self-intersection at {point:?} is not transverse")
            }
            Violation::LabelCount { expected, found } => {
                write!(f, "{found} labels for {expected} double points")
            }
            Violation::MarkOutOfRange { step } => write!(f, "mark on step {step} is off the path"),
            Violation::DuplicateMark { step, offset } => {
                write!(f, "mark {step}:{offset} given twice")
            }
            Violation::CycleNotBroken => write!(f, "cycle not broken by marked points"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Diagnostics {
    pub violations: Vec<Violation>,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn is_generic(&self) -> bool {
        self.violations
            .iter()
            .all(|v| matches!(v, Violation::CycleNotBroken))
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// A double point with the two path indices passing through it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DoublePoint {
    pub point: V2,
    pub first: usize,
    pub second: usize,
}

/// Geometry of a path: its points and double points in first-traversal order.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub points: Vec<V2>,
    pub double_points: Vec<DoublePoint>,
}

impl Skeleton {
    fn direction(&self, i: usize) -> V2 {
        let (a, b) = (self.points[i], self.points[i + 1]);
        (b.0 - a.0, b.1 - a.1)
    }

    /// Edges of the curve between consecutive vertices (end points and
    /// double points), as ranges of steps with their vertex ids.
    fn edges(&self) -> Vec<(std::ops::Range<usize>, usize, usize)> {
        let m = self.points.len() - 1;
        // vertex id 0 and 1 are the end points, 2 + k the double points
        let mut stops: Vec<(usize, usize)> = vec![(0, 0), (m, 1)];
        for (k, dp) in self.double_points.iter().enumerate() {
            stops.push((dp.first, 2 + k));
            stops.push((dp.second, 2 + k));
        }
        stops.sort();
        stops
            .windows(2)
            .map(|w| (w[0].0..w[1].0, w[0].1, w[1].1))
            .collect()
    }
}

/// Genericity analysis of a path on its own.
pub fn analyze(path: &GridPath) -> (Skeleton, Diagnostics) {
    let points = path.points();
    let m = path.len();
    let mut diag = Diagnostics::default();
    let mut segs = HashSet::new();
    for i in 0..m {
        let (a, b) = (points[i], points[i + 1]);
        let key = if a < b { (a, b) } else { (b, a) };
        if !segs.insert(key) {
            diag.violations.push(Violation::RepeatedSegment { step: i });
        }
    }
    let mut visits: BTreeMap<V2, Vec<usize>> = BTreeMap::new();
    for (i, &p) in points.iter().enumerate() {
        visits.entry(p).or_default().push(i);
    }
    let mut double_points = Vec::new();
    for (&p, idx) in &visits {
        match idx.len() {
            1 => {}
            2 => {
                if idx.iter().any(|&i| i == 0 || i == m) {
                    diag.violations
                        .push(Violation::EndpointOnCurve { point: p });
                    continue;
                }
                let straight = |i: usize| add(points[i - 1], points[i + 1]) == scale(2, p);
                let d = |i: usize| (points[i + 1].0 - p.0, points[i + 1].1 - p.1);
                let ok = straight(idx[0]) && straight(idx[1]) && dot(d(idx[0]), d(idx[1])) == 0;
                if !ok {
                    diag.violations.push(Violation::NotTransverse { point: p });
                    continue;
                }
                double_points.push(DoublePoint {
                    point: p,
                    first: idx[0],
                    second: idx[1],
                });
            }
            _ => diag.violations.push(Violation::TripleVisit { point: p }),
        }
    }
    double_points.sort_by_key(|d| d.first);
    (
        Skeleton {
            points,
            double_points,
        },
        diag,
    )
}

impl LabelledInterval {
    pub fn new(path: GridPath, labels: Vec<DoublePointLabel>, marks: Vec<MarkedPoint>) -> Self {
        LabelledInterval {
            path,
            labels,
            marks,
        }
    }

    pub fn skeleton(&self) -> Skeleton {
        analyze(&self.path).0
    }

    pub fn validate(&self) -> Diagnostics {
        let (sk, mut diag) = analyze(&self.path);
        self.check_labels_and_marks(&sk, &mut diag);
        if diag.is_ok() && self.residual_cycle(&sk) {
            diag.violations.push(Violation::CycleNotBroken);
        }
        diag
    }

    fn check_labels_and_marks(&self, sk: &Skeleton, diag: &mut Diagnostics) {
        if self.labels.len() != sk.double_points.len() {
            diag.violations.push(Violation::LabelCount {
                expected: sk.double_points.len(),
                found: self.labels.len(),
            });
        }
        let mut seen = HashSet::new();
        for mk in &self.marks {
            if mk.step >= self.path.len() {
                diag.violations
                    .push(Violation::MarkOutOfRange { step: mk.step });
            } else if !seen.insert(*mk) {
                diag.violations.push(Violation::DuplicateMark {
                    step: mk.step,
                    offset: mk.offset,
                });
            }
        }
    }

    /// True when removing the marked points leaves a cycle.
    fn residual_cycle(&self, sk: &Skeleton) -> bool {
        if self.path.is_empty() {
            return false;
        }
        let marked: HashSet<usize> = self.marks.iter().map(|m| m.step).collect();
        let mut uf = UnionFind::new(2 + sk.double_points.len());
        for (range, a, b) in sk.edges() {
            if range.clone().any(|s| marked.contains(&s)) {
                continue;
            }
            if !uf.union(a, b) {
                return true;
            }
        }
        false
    }

    pub fn counts(&self) -> [usize; 4] {
        let mut out = [0; 4];
        for l in &self.labels {
            out[l.kind as usize] += 1;
        }
        out
    }
}

/// What produced a crossing of a track diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CrossingOrigin {
    /// Crossing in the given quadrant of a double point.
    DoublePoint { index: usize, quadrant: u8 },
    /// First or second crossing of the twist at a mark.
    Twist { mark: usize, which: u8 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackDiagram {
    pub diagram: PlanarDiagram,
    pub origins: Vec<CrossingOrigin>,
    /// Plane position of each crossing, for drawing.
    pub positions: Vec<(f64, f64)>,
}

struct Visit {
    crossing: usize,
    dir: V2,
}

fn quadrant_of(v: V2) -> u8 {
    match (v.0 > 0, v.1 > 0) {
        (true, true) => 0,
        (false, true) => 1,
        (false, false) => 2,
        (true, false) => 3,
    }
}

/// Number of quarter turns counterclockwise from `from` to `to`.
fn quarter_turns(from: V2, to: V2) -> u8 {
    let mut v = from;
    for k in 0..4 {
        if v == to {
            return k;
        }
        v = left(v);
    }
    unreachable!("diagonal vectors differ by quarter turns")
}

/// Runs the three construction steps without any validity check.
fn construct(c: &LabelledInterval, sk: &Skeleton, conv: &Convention) -> TrackDiagram {
    let patterns: Vec<[Sign; 4]> = c.labels.iter().map(|l| l.quadrant_signs(conv)).collect();
    construct_signed(c, sk, conv.anchor, &patterns)
}

fn construct_signed(
    c: &LabelledInterval,
    sk: &Skeleton,
    anchor_kind: Anchor,
    patterns: &[[Sign; 4]],
) -> TrackDiagram {
    if c.path.is_empty() || (sk.double_points.is_empty() && c.marks.is_empty()) {
        return TrackDiagram {
            diagram: PlanarDiagram::unknot(),
            origins: Vec::new(),
            positions: Vec::new(),
        };
    }
    let mut origins = Vec::new();
    let mut positions = Vec::new();
    let mut signs = Vec::new();
    // events on the left (true) and right (false) parallels: (param, visit)
    let mut events: Vec<(bool, f64, Visit)> = Vec::new();
    for (k, dp) in sk.double_points.iter().enumerate() {
        let (da, db) = (sk.direction(dp.first), sk.direction(dp.second));
        let (na, nb) = (left(da), left(db));
        let pattern = patterns[k];
        let anchor = add(da, scale(-1, db));
        for sa in [1, -1] {
            for sb in [1, -1] {
                let region = add(scale(sa, na), scale(sb, nb));
                let q = match anchor_kind {
                    Anchor::Absolute => quadrant_of(region),
                    Anchor::Relative => quarter_turns(anchor, region),
                };
                let id = origins.len();
                origins.push(CrossingOrigin::DoublePoint {
                    index: k,
                    quadrant: q,
                });
                let at = sk.points[dp.first];
                positions.push((
                    at.0 as f64 + 0.2 * region.0 as f64,
                    at.1 as f64 + 0.2 * region.1 as f64,
                ));
                signs.push(pattern[q as usize]);
                let pa = dp.first as f64 + 0.1 * (sb * dot(nb, da)) as f64;
                let pb = dp.second as f64 + 0.1 * (sa * dot(na, db)) as f64;
                events.push((
                    sa > 0,
                    pa,
                    Visit {
                        crossing: id,
                        dir: scale(sa, da),
                    },
                ));
                events.push((
                    sb > 0,
                    pb,
                    Visit {
                        crossing: id,
                        dir: scale(sb, db),
                    },
                ));
            }
        }
    }
    let mut per_step: BTreeMap<usize, Vec<(u32, usize)>> = BTreeMap::new();
    for (i, mk) in c.marks.iter().enumerate() {
        per_step.entry(mk.step).or_default().push((mk.offset, i));
    }
    for (&step, list) in per_step.iter_mut() {
        list.sort();
        let d = sk.direction(step);
        let n = left(d);
        let count = list.len() as f64;
        for (j, &(_, mark)) in list.iter().enumerate() {
            let centre = step as f64 + (j as f64 + 1.0) / (count + 1.0);
            let h = 0.2 / (count + 1.0);
            for (which, t, ld, rd) in [
                (
                    1u8,
                    centre - h,
                    add(d, scale(-1, n)),
                    add(scale(-1, d), scale(-1, n)),
                ),
                (2u8, centre + h, add(d, n), add(scale(-1, d), n)),
            ] {
                let id = origins.len();
                origins.push(CrossingOrigin::Twist { mark, which });
                let (p, frac) = (sk.points[step], t - step as f64);
                positions.push((
                    p.0 as f64 + frac * d.0 as f64,
                    p.1 as f64 + frac * d.1 as f64,
                ));
                signs.push(Sign::Positive);
                events.push((
                    true,
                    t,
                    Visit {
                        crossing: id,
                        dir: ld,
                    },
                ));
                events.push((
                    false,
                    t,
                    Visit {
                        crossing: id,
                        dir: rd,
                    },
                ));
            }
        }
    }
    let mut lefts: Vec<&(bool, f64, Visit)> = events.iter().filter(|e| e.0).collect();
    let mut rights: Vec<&(bool, f64, Visit)> = events.iter().filter(|e| !e.0).collect();
    lefts.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    rights.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let seq: Vec<&Visit> = lefts.iter().chain(rights.iter()).map(|e| &e.2).collect();
    let nv = seq.len();
    let mut visits_of: Vec<Vec<usize>> = vec![Vec::new(); origins.len()];
    for (k, v) in seq.iter().enumerate() {
        visits_of[v.crossing].push(k);
    }
    let arc_in = |k: usize| ((k + nv - 1) % nv) as ArcId;
    let arc_out = |k: usize| k as ArcId;
    let crossings = visits_of
        .iter()
        .enumerate()
        .map(|(id, vs)| {
            let (x, y) = (vs[0], vs[1]);
            let (dx, dy) = (seq[x].dir, seq[y].dir);
            let want = signs[id];
            // sign of a crossing is the sign of over x under
            let (o, u) = if (cross(dx, dy) > 0) == (want == Sign::Positive) {
                (x, y)
            } else {
                (y, x)
            };
            let (dov, du) = (seq[o].dir, seq[u].dir);
            let slots = if cross(scale(-1, du), dov) > 0 {
                [arc_in(u), arc_out(o), arc_out(u), arc_in(o)]
            } else {
                [arc_in(u), arc_in(o), arc_out(u), arc_out(o)]
            };
            let c = Crossing { slots, sign: want };
            debug_assert_eq!(c.slots[c.over_in()], arc_in(o));
            c
        })
        .collect();
    TrackDiagram {
        diagram: PlanarDiagram::from_parts_unchecked(crossings, 0),
        origins,
        positions,
    }
}

fn check_generic(c: &LabelledInterval) -> Result<Skeleton, TrackError> {
    let (sk, mut diag) = analyze(&c.path);
    c.check_labels_and_marks(&sk, &mut diag);
    if !diag.is_generic() || !diag.is_ok() {
        return Err(TrackError::Invalid(diag));
    }
    Ok(sk)
}

fn check_formulas(c: &LabelledInterval, t: &TrackDiagram, seifert: bool) -> Result<(), TrackError> {
    let [a, b, cc, d] = c.counts();
    let r = c.marks.len();
    let d_ = &t.diagram;
    let expect_x = 4 * (a + b + cc + d) + 2 * r;
    if d_.crossing_count() != expect_x {
        return Err(TrackError::Postcondition(format!(
            "{} crossings, expected {expect_x}",
            d_.crossing_count()
        )));
    }
    let w = (2 * cc + 4 * d + 2 * r) as i32;
    if d_.writhe() != w {
        return Err(TrackError::Postcondition(format!(
            "writhe {}, expected {w}",
            d_.writhe()
        )));
    }
    if d_.component_count() != 1 {
        return Err(TrackError::Postcondition(format!(
            "{} components",
            d_.component_count()
        )));
    }
    d_.check_planar()
        .map_err(|e| TrackError::Postcondition(e.to_string()))?;
    if seifert {
        let s = seifert_circle_count(d_);
        if s != 2 * r + 1 {
            return Err(TrackError::Postcondition(format!(
                "{s} Seifert circles, expected {}",
                2 * r + 1
            )));
        }
    }
    Ok(())
}

pub fn build_diagram(c: &LabelledInterval) -> Result<TrackDiagram, TrackError> {
    build_with(c, &Convention::CALIBRATED)
}

/// Builds a valid interval under a given sign convention, checking the
/// crossing count, writhe and Seifert circle formulas.
pub fn build_with(c: &LabelledInterval, conv: &Convention) -> Result<TrackDiagram, TrackError> {
    let diag = c.validate();
    if !diag.is_ok() {
        return Err(TrackError::Invalid(diag));
    }
    let sk = c.skeleton();
    let t = construct(c, &sk, conv);
    check_formulas(c, &t, true)?;
    Ok(t)
}

/// Builds without requiring the marks to break every cycle. Only the upper
/// bound `C + 2D` on the 4-genus is returned.
pub fn relaxed_build(c: &LabelledInterval) -> Result<(TrackDiagram, i32), TrackError> {
    relaxed_build_with(c, &Convention::CALIBRATED)
}

pub fn relaxed_build_with(
    c: &LabelledInterval,
    conv: &Convention,
) -> Result<(TrackDiagram, i32), TrackError> {
    let sk = check_generic(c)?;
    let t = construct(c, &sk, conv);
    check_formulas(c, &t, false)?;
    let [_, _, cc, d] = c.counts();
    Ok((t, (cc + 2 * d) as i32))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrackBounds {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub r: usize,
    pub four_genus: i32,
    pub gordian: Option<i32>,
    pub ordinary_genus: Option<i32>,
    pub slice_bennequin_bound: i32,
}

/// 4-genus (and clasp number) `C + 2D`; the unknotting number and genus
/// agree with it when no type-b double point occurs.
pub fn bounds(c: &LabelledInterval) -> Result<TrackBounds, TrackError> {
    let t = build_diagram(c)?;
    let [a, b, cc, d] = c.counts();
    let g4 = (cc + 2 * d) as i32;
    let w = t.diagram.writhe();
    let s = seifert_circle_count(&t.diagram) as i32;
    let special = (b == 0).then_some(g4);
    Ok(TrackBounds {
        a,
        b,
        c: cc,
        d,
        r: c.marks.len(),
        four_genus: g4,
        gordian: special,
        ordinary_genus: special,
        slice_bennequin_bound: (1 - s + w) / 2,
    })
}

/// Every labelling of a shape, in lexicographic symbol order with the first
/// traversed double point most significant.
pub fn enumerate_labellings(
    shape: &GridPath,
    marks: &[MarkedPoint],
) -> Result<impl Iterator<Item = LabelledInterval>, TrackError> {
    let (sk, _) = analyze(shape);
    let k = sk.double_points.len();
    let skeleton = LabelledInterval::new(
        shape.clone(),
        vec![DoublePointLabel::ALL[0]; k],
        marks.to_vec(),
    );
    let diag = skeleton.validate();
    if !diag.is_ok() {
        return Err(TrackError::Invalid(diag));
    }
    let total = 11usize.pow(k as u32);
    Ok((0..total).map(move |mut idx| {
        let mut labels = vec![DoublePointLabel::ALL[0]; k];
        for slot in labels.iter_mut().rev() {
            *slot = DoublePointLabel::ALL[idx % 11];
            idx /= 11;
        }
        LabelledInterval {
            labels,
            ..skeleton.clone()
        }
    }))
}

impl LabelledInterval {
    /// The same interval traversed from the other end. Absolute sign regions
    /// do not depend on the direction, so the diagram is unchanged.
    pub fn reversed(&self) -> LabelledInterval {
        let m = self.path.len();
        let sk = self.skeleton();
        let mut order: Vec<(usize, DoublePointLabel)> = sk
            .double_points
            .iter()
            .zip(&self.labels)
            .map(|(dp, &l)| (m - dp.second, l))
            .collect();
        order.sort_by_key(|x| x.0);
        let mut per_step: HashMap<usize, u32> = HashMap::new();
        for mk in &self.marks {
            *per_step.entry(mk.step).or_default() += 1;
        }
        let marks = self
            .marks
            .iter()
            .map(|mk| MarkedPoint {
                step: m - 1 - mk.step,
                offset: per_step[&mk.step] - 1 - mk.offset,
            })
            .collect();
        LabelledInterval {
            path: self.path.reversed(),
            labels: order.into_iter().map(|x| x.1).collect(),
            marks,
        }
    }

    /// The path scaled by two about its start; marks keep their segment.
    fn doubled(&self) -> LabelledInterval {
        let moves = self.path.moves.iter().flat_map(|&m| [m, m]).collect();
        let path = GridPath {
            moves,
            start: scale(2, self.path.start),
        };
        let marks = self
            .marks
            .iter()
            .map(|mk| MarkedPoint {
                step: 2 * mk.step,
                offset: mk.offset,
            })
            .collect();
        LabelledInterval {
            path,
            labels: self.labels.clone(),
            marks,
        }
    }

    fn translated(&self, by: V2) -> LabelledInterval {
        let mut out = self.clone();
        out.path.start = add(out.path.start, by);
        out
    }
}

fn bbox(points: &[V2]) -> (V2, V2) {
    let lo = (
        points.iter().map(|p| p.0).min().unwrap(),
        points.iter().map(|p| p.1).min().unwrap(),
    );
    let hi = (
        points.iter().map(|p| p.0).max().unwrap(),
        points.iter().map(|p| p.1).max().unwrap(),
    );
    (lo, hi)
}

/// Lattice points covered by a path including segment midpoints.
fn occupied(path: &GridPath) -> HashSet<V2> {
    path.points().into_iter().collect()
}

/// Shortest lattice route from `a` to `b` through free points inside `frame`.
fn corridor(a: V2, b: V2, blocked: &HashSet<V2>, frame: (V2, V2)) -> Option<Vec<Move>> {
    let mut prev: HashMap<V2, (V2, Move)> = HashMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = HashSet::from([a]);
    while let Some(p) = queue.pop_front() {
        if p == b {
            let mut moves = Vec::new();
            let mut q = b;
            while q != a {
                let (from, m) = prev[&q];
                moves.push(m);
                q = from;
            }
            moves.reverse();
            return Some(moves);
        }
        for m in [Move::R, Move::U, Move::D, Move::L] {
            let q = add(p, m.delta());
            let inside =
                q.0 >= frame.0 .0 && q.0 <= frame.1 .0 && q.1 >= frame.0 .1 && q.1 <= frame.1 .1;
            if inside && (q == b || !blocked.contains(&q)) && seen.insert(q) {
                prev.insert(q, (p, m));
                queue.push_back(q);
            }
        }
    }
    None
}

/// Connected sum by joining the end of `c1` to the start of `c2` with a
/// corridor through the outer region. An interval whose end cannot be
/// reached from outside is traversed from its other end instead.
pub fn glue(c1: &LabelledInterval, c2: &LabelledInterval) -> Result<LabelledInterval, TrackError> {
    for c in [c1, c2] {
        let d = c.validate();
        if !d.is_ok() {
            return Err(TrackError::Invalid(d));
        }
    }
    let mut last_err = String::new();
    for (x, y) in [
        (c1.clone(), c2.clone()),
        (c1.reversed(), c2.clone()),
        (c1.clone(), c2.reversed()),
        (c1.reversed(), c2.reversed()),
    ] {
        match try_glue(&x, &y) {
            Ok(g) => return Ok(g),
            Err(e) => last_err = e,
        }
    }
    Err(TrackError::Glue(last_err))
}

fn try_glue(c1: &LabelledInterval, c2: &LabelledInterval) -> Result<LabelledInterval, String> {
    let a = c1.doubled();
    let b = c2.doubled();
    let (lo1, hi1) = bbox(&a.path.points());
    let (lo2, _) = bbox(&b.path.points());
    let b = b.translated((hi1.0 - lo2.0 + 4, lo1.1 - lo2.1));
    let pa = a.path.points();
    let pb = b.path.points();
    let (glo, ghi) = bbox(&[pa.clone(), pb.clone()].concat());
    let frame = ((glo.0 - 2, glo.1 - 2), (ghi.0 + 2, ghi.1 + 2));
    let mut blocked = occupied(&a.path);
    blocked.extend(occupied(&b.path));
    let end = *pa.last().unwrap();
    let start = pb[0];
    // reachable from the frame corner means the end sits in the outer region
    let corner = frame.0;
    if corridor(end, corner, &blocked, frame).is_none() {
        return Err("end point of the first interval is enclosed".into());
    }
    if corridor(start, corner, &blocked, frame).is_none() {
        return Err("start point of the second interval is enclosed".into());
    }
    let link = corridor(end, start, &blocked, frame).ok_or("no corridor between the intervals")?;
    let offset = a.path.len() + link.len();
    let mut moves = a.path.moves.clone();
    moves.extend(&link);
    moves.extend(&b.path.moves);
    let mut marks = a.marks.clone();
    marks.extend(b.marks.iter().map(|mk| MarkedPoint {
        step: mk.step + offset,
        offset: mk.offset,
    }));
    let mut labels = a.labels.clone();
    labels.extend(&b.labels);
    let out = LabelledInterval {
        path: GridPath {
            moves,
            start: a.path.start,
        },
        labels,
        marks,
    };
    let diag = out.validate();
    if !diag.is_ok() {
        return Err(diag.to_string());
    }
    Ok(out)
}

/// Track file text: `path = ...`, optional `start = x, y`, `labels = ...`
/// and `marks = 3, 11:1`.
impl fmt::Display for LabelledInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "path = {}", self.path.word())?;
        if self.path.start != (0, 0) {
            writeln!(f, "start = {}, {}", self.path.start.0, self.path.start.1)?;
        }
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        writeln!(f, "labels = {}", labels.join(", "))?;
        let marks: Vec<String> = self
            .marks
            .iter()
            .map(|m| {
                if m.offset == 0 {
                    m.step.to_string()
                } else {
                    format!("{}:{}", m.step, m.offset)
                }
            })
            .collect();
        writeln!(f, "marks = {}", marks.join(", "))
    }
}

impl FromStr for LabelledInterval {
    type Err = TrackError;

    fn from_str(text: &str) -> Result<Self, TrackError> {
        let mut path = None;
        let mut start = (0, 0);
        let mut labels = Vec::new();
        let mut marks = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| TrackError::Syntax { line, message };
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (key, value) = t
                .split_once('=')
                .ok_or_else(|| err("expected 'key = value'".into()))?;
            let items = || value.split(',').map(str::trim).filter(|s| !s.is_empty());
            match key.trim() {
                "path" => {
                    let p = GridPath::parse(value.trim()).map_err(|e| match e {
                        TrackError::Syntax { message, .. } => err(message),
                        other => other,
                    })?;
                    path = Some(p);
                }
                "start" => {
                    let v: Vec<i32> = items()
                        .map(|s| s.parse().map_err(|_| err(format!("bad coordinate '{s}'"))))
                        .collect::<Result<_, _>>()?;
                    if v.len() != 2 {
                        return Err(err("start needs two coordinates".into()));
                    }
                    start = (v[0], v[1]);
                }
                "labels" => {
                    labels = items()
                        .map(|s| {
                            s.parse::<DoublePointLabel>()
                                .map_err(|_| err(format!("unknown symbol '{s}'")))
                        })
                        .collect::<Result<_, _>>()?;
                }
                "marks" => {
                    marks = items()
                        .map(|s| {
                            let (st, off) = s.split_once(':').unwrap_or((s, "0"));
                            let step = st
                                .trim()
                                .parse()
                                .map_err(|_| err(format!("bad mark '{s}'")))?;
                            let offset = off
                                .trim()
                                .parse()
                                .map_err(|_| err(format!("bad mark '{s}'")))?;
                            Ok(MarkedPoint { step, offset })
                        })
                        .collect::<Result<_, TrackError>>()?;
                }
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        let mut path = path.ok_or(TrackError::Syntax {
            line: 0,
            message: "missing 'path'".into(),
        })?;
        path.start = start;
        Ok(LabelledInterval {
            path,
            labels,
            marks,
        })
    }
}
