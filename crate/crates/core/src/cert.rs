//! Quasipositivity certificates for diagrams.
//!
//! A certificate partitions the crossings into positive singles and pairs of
//! one positive and one negative crossing joining the same two Seifert
//! circles. Along any shared circle two pairs may not interleave; singles are
//! ignored for that test.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{PlanarDiagram, Sign};
use crate::seifert::{seifert_decompose, SeifertDecomposition};
use crate::track::{CrossingOrigin, TrackDiagram};

pub const DEFAULT_CERT_CAP: usize = 20;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub singles: Vec<usize>,
    /// (positive, negative)
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertViolation {
    #[error("crossing {0} is not covered")]
    Uncovered(usize),
    #[error("crossing {0} is used more than once")]
    Reused(usize),
    #[error("crossing {0} does not exist")]
    Unknown(usize),
    #[error("single crossing {0} is negative")]
    NegativeSingle(usize),
    #[error("pair ({0}, {1}) does not have opposite signs")]
    PairSigns(usize, usize),
    #[error("pair ({0}, {1}) does not join the same two Seifert circles")]
    PairCircles(usize, usize),
    #[error("pairs ({}, {}) and ({}, {}) interleave along circle {circle}", .first.0, .first.1, .second.0, .second.1)]
    Interleaved {
        first: (usize, usize),
        second: (usize, usize),
        circle: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("diagram has {crossings} crossings, above the certificate cap {cap}")]
    TooManyCrossings { crossings: usize, cap: usize },
    #[error("no track certificate: {0}")]
    Track(String),
    #[error("bad certificate text: {0}")]
    Syntax(String),
}

/// Positions of crossings along every Seifert circle.
struct CircleOrder {
    decomposition: SeifertDecomposition,
    pos: Vec<HashMap<usize, usize>>,
}

impl CircleOrder {
    fn new(d: &PlanarDiagram) -> Self {
        let decomposition = seifert_decompose(d);
        let pos = (0..decomposition.circle_count())
            .map(|c| {
                decomposition
                    .crossings_along(d, c)
                    .into_iter()
                    .enumerate()
                    .map(|(i, x)| (x, i))
                    .collect()
            })
            .collect();
        CircleOrder { decomposition, pos }
    }

    fn circles(&self, x: usize) -> (usize, usize) {
        self.decomposition.graph[x].circles
    }

    fn interleaved(&self, p: (usize, usize), q: (usize, usize)) -> Option<usize> {
        let (a, b) = self.circles(p.0);
        let (qa, qb) = self.circles(q.0);
        [a, b]
            .into_iter()
            .filter(|&c| c == qa || c == qb)
            .find(|&c| {
                let pos = &self.pos[c];
                let (i, j) = (pos[&p.0], pos[&p.1]);
                let inside = |x: usize| (i.min(j)..=i.max(j)).contains(&pos[&x]);
                inside(q.0) != inside(q.1)
            })
    }
}

/// Independent validity check of a certificate against a diagram.
pub fn check_pairing(d: &PlanarDiagram, p: &Pairing) -> Result<(), CertViolation> {
    let n = d.crossing_count();
    let mut used = vec![false; n];
    let all = p
        .singles
        .iter()
        .copied()
        .chain(p.pairs.iter().flat_map(|&(a, b)| [a, b]));
    for x in all {
        if x >= n {
            return Err(CertViolation::Unknown(x));
        }
        if used[x] {
            return Err(CertViolation::Reused(x));
        }
        used[x] = true;
    }
    if let Some(x) = used.iter().position(|u| !u) {
        return Err(CertViolation::Uncovered(x));
    }
    let sign = |x: usize| d.crossings()[x].sign;
    for &x in &p.singles {
        if sign(x) != Sign::Positive {
            return Err(CertViolation::NegativeSingle(x));
        }
    }
    let order = CircleOrder::new(d);
    for &(a, b) in &p.pairs {
        if sign(a) == sign(b) {
            return Err(CertViolation::PairSigns(a, b));
        }
        if order.circles(a) != order.circles(b) {
            return Err(CertViolation::PairCircles(a, b));
        }
    }
    for (i, &first) in p.pairs.iter().enumerate() {
        for &second in &p.pairs[i + 1..] {
            if let Some(circle) = order.interleaved(first, second) {
                return Err(CertViolation::Interleaved {
                    first,
                    second,
                    circle,
                });
            }
        }
    }
    Ok(())
}

pub fn find_certificate(d: &PlanarDiagram) -> Result<Option<Pairing>, CertError> {
    find_certificate_with_cap(d, DEFAULT_CERT_CAP)
}

/// Backtracking search pairing every negative crossing with a positive one.
/// The first certificate found is the lexicographically least sequence of
/// partners for the negatives in increasing order.
pub fn find_certificate_with_cap(
    d: &PlanarDiagram,
    cap: usize,
) -> Result<Option<Pairing>, CertError> {
    let n = d.crossing_count();
    if n > cap {
        return Err(CertError::TooManyCrossings { crossings: n, cap });
    }
    let negatives: Vec<usize> = (0..n)
        .filter(|&x| d.crossings()[x].sign == Sign::Negative)
        .collect();
    let order = CircleOrder::new(d);
    let candidates: Vec<Vec<usize>> = negatives
        .iter()
        .map(|&m| {
            (0..n)
                .filter(|&x| {
                    d.crossings()[x].sign == Sign::Positive && order.circles(x) == order.circles(m)
                })
                .collect()
        })
        .collect();

    fn search(
        k: usize,
        negatives: &[usize],
        candidates: &[Vec<usize>],
        order: &CircleOrder,
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
    ) -> bool {
        if k == negatives.len() {
            return true;
        }
        for &x in &candidates[k] {
            if used[x] {
                continue;
            }
            let pair = (x, negatives[k]);
            if pairs.iter().any(|&q| order.interleaved(q, pair).is_some()) {
                continue;
            }
            used[x] = true;
            pairs.push(pair);
            if search(k + 1, negatives, candidates, order, used, pairs) {
                return true;
            }
            pairs.pop();
            used[x] = false;
        }
        false
    }

    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    if !search(0, &negatives, &candidates, &order, &mut used, &mut pairs) {
        return Ok(None);
    }
    let singles = (0..n)
        .filter(|&x| !used[x] && d.crossings()[x].sign == Sign::Positive)
        .collect();
    Ok(Some(Pairing { singles, pairs }))
}

/// Constructive certificate for a track diagram: each negative crossing at a
/// double point is paired with a positive crossing in a neighbouring quadrant
/// of the same double point.
pub fn track_certificate(t: &TrackDiagram) -> Result<Pairing, CertError> {
    let d = &t.diagram;
    let sign = |x: usize| d.crossings()[x].sign;
    let mut by_point: HashMap<usize, [usize; 4]> = HashMap::new();
    for (x, o) in t.origins.iter().enumerate() {
        if let CrossingOrigin::DoublePoint { index, quadrant } = *o {
            by_point.entry(index).or_insert([usize::MAX; 4])[quadrant as usize] = x;
        }
    }
    let mut points: Vec<_> = by_point.into_iter().collect();
    points.sort();
    let options: Vec<Vec<Vec<(usize, usize)>>> = points
        .iter()
        .map(|(_, q)| local_matchings(q, &sign))
        .collect();

    let order = CircleOrder::new(d);
    let mut chosen = Vec::new();
    if !pick(0, &options, &order, &mut chosen) {
        return Err(CertError::Track(
            "no compatible choice of neighbouring partners".into(),
        ));
    }
    let paired: BTreeSet<usize> = chosen.iter().flat_map(|&(a, b)| [a, b]).collect();
    let singles = (0..d.crossing_count())
        .filter(|x| !paired.contains(x))
        .collect();
    let p = Pairing {
        singles,
        pairs: chosen,
    };
    check_pairing(d, &p).map_err(|v| CertError::Track(v.to_string()))?;
    Ok(p)
}

/// All ways to pair the negative quadrants with distinct neighbouring
/// positive quadrants, preferring the counterclockwise neighbour.
fn local_matchings(q: &[usize; 4], sign: &dyn Fn(usize) -> Sign) -> Vec<Vec<(usize, usize)>> {
    let negatives: Vec<usize> = (0..4).filter(|&i| sign(q[i]) == Sign::Negative).collect();
    let mut out = Vec::new();
    fn rec(
        k: usize,
        negatives: &[usize],
        q: &[usize; 4],
        sign: &dyn Fn(usize) -> Sign,
        used: &mut [bool; 4],
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if k == negatives.len() {
            out.push(acc.clone());
            return;
        }
        let m = negatives[k];
        for step in [1, 3] {
            let p = (m + step) % 4;
            if used[p] || sign(q[p]) != Sign::Positive {
                continue;
            }
            used[p] = true;
            acc.push((q[p], q[m]));
            rec(k + 1, negatives, q, sign, used, acc, out);
            acc.pop();
            used[p] = false;
        }
    }
    rec(
        0,
        &negatives,
        q,
        sign,
        &mut [false; 4],
        &mut Vec::new(),
        &mut out,
    );
    out
}

fn pick(
    k: usize,
    options: &[Vec<Vec<(usize, usize)>>],
    order: &CircleOrder,
    chosen: &mut Vec<(usize, usize)>,
) -> bool {
    if k == options.len() {
        return true;
    }
    for opt in &options[k] {
        let ok = opt
            .iter()
            .all(|&p| order.circles(p.0) == order.circles(p.1))
            && opt.iter().enumerate().all(|(i, &p)| {
                chosen
                    .iter()
                    .chain(opt[..i].iter())
                    .all(|&q| order.interleaved(q, p).is_none())
            });
        if !ok {
            continue;
        }
        let len = chosen.len();
        chosen.extend_from_slice(opt);
        if pick(k + 1, options, order, chosen) {
            return true;
        }
        chosen.truncate(len);
    }
    false
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let singles: Vec<String> = self.singles.iter().map(|x| x.to_string()).collect();
        let pairs: Vec<String> = self
            .pairs
            .iter()
            .map(|(a, b)| format!("({a}, {b})"))
            .collect();
        write!(
            f,
            "singles: [{}]; pairs: [{}]",
            singles.join(", "),
            pairs.join(", ")
        )
    }
}

impl FromStr for Pairing {
    type Err = CertError;

    fn from_str(s: &str) -> Result<Self, CertError> {
        let err = |m: &str| CertError::Syntax(m.to_string());
        let (a, b) = s
            .trim()
            .split_once(';')
            .ok_or_else(|| err("expected 'singles: [...]; pairs: [...]'"))?;
        let list = |part: &str, key: &str| -> Result<String, CertError> {
            let rest = part
                .trim()
                .strip_prefix(key)
                .ok_or_else(|| err(&format!("missing '{key}'")))?;
            let rest = rest
                .trim_start()
                .strip_prefix(':')
                .ok_or_else(|| err("missing ':'"))?
                .trim();
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| err("missing brackets"))?;
            Ok(inner.to_string())
        };
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| err(&format!("bad crossing id '{}'", t.trim())))
        };
        let singles = list(a, "singles")?
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(num)
            .collect::<Result<Vec<_>, _>>()?;
        let body = list(b, "pairs")?;
        let mut pairs = Vec::new();
        for chunk in body.split(')') {
            let chunk = chunk.trim().trim_start_matches(',').trim();
            if chunk.is_empty() {
                continue;
            }
            let inner = chunk.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
            let (x, y) = inner
                .split_once(',')
                .ok_or_else(|| err("pair needs two ids"))?;
            pairs.push((num(x)?, num(y)?));
        }
        Ok(Pairing { singles, pairs })
    }
}
