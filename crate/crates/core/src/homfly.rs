//! HOMFLY polynomial by skein resolution.
//!
//! Conventions: `P(unknot) = 1` and `v^-1 P(D+) - v P(D-) = z P(D0)`.
//! Each node is reduced by kink and bigon removal, split pieces are factored
//! out, and the remaining diagram is driven towards a descending diagram by
//! switching a crossing first met from below. Results are memoized on the
//! canonical key of the reduced piece.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{PlanarDiagram, Sign};
use crate::moves::simplify;
use crate::poly::LaurentPoly2;
use crate::seifert::seifert_circle_count;

pub const DEFAULT_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomflyError {
    #[error("diagram has {crossings} crossings, above the cap of {cap}")]
    TooManyCrossings { crossings: usize, cap: usize },
}

/// Which crossing is resolved next among those met from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    FirstBad,
    LastBad,
}

pub struct HomflyEngine {
    cap: usize,
    strategy: Strategy,
    memo: RwLock<HashMap<Vec<u32>, LaurentPoly2>>,
}

impl Default for HomflyEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl HomflyEngine {
    pub fn new() -> Self {
        HomflyEngine {
            cap: DEFAULT_CAP,
            strategy: Strategy::default(),
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    pub fn homfly(&self, d: &PlanarDiagram) -> Result<LaurentPoly2, HomflyError> {
        if d.crossing_count() > self.cap {
            return Err(HomflyError::TooManyCrossings {
                crossings: d.crossing_count(),
                cap: self.cap,
            });
        }
        Ok(self.eval(d))
    }

    fn eval(&self, d: &PlanarDiagram) -> LaurentPoly2 {
        let d = simplify(d);
        let loops = d.free_loops();
        if d.crossing_count() == 0 {
            return LaurentPoly2::split_factor().pow(loops.saturating_sub(1));
        }
        let pieces = d.pieces();
        let mut out = LaurentPoly2::split_factor().pow(loops + pieces.len() as u32 - 1);
        for piece in &pieces {
            let sub = if pieces.len() == 1 && loops == 0 {
                d.clone()
            } else {
                d.sub_diagram(piece)
            };
            out = &out * &self.eval_connected(&sub);
        }
        out
    }

    fn eval_connected(&self, d: &PlanarDiagram) -> LaurentPoly2 {
        let key = d.canonical_key();
        if let Some(p) = self.memo.read().unwrap().get(&key) {
            return p.clone();
        }
        let plan = descending_plan(d);
        let result = match pick(&plan.bad, self.strategy) {
            None => LaurentPoly2::split_factor().pow(plan.components as u32 - 1),
            Some(x) => {
                let switched = d.switch_crossing(x);
                let smoothed = d.smooth_crossing(x);
                let (ps, p0) = self.branches(&switched, &smoothed, d.crossing_count());
                match d.crossings()[x].sign {
                    // P+ = v^2 P- + v z P0
                    Sign::Positive => &ps.shift(1, 2, 0) + &p0.shift(1, 1, 1),
                    // P- = v^-2 P+ - v^-1 z P0
                    Sign::Negative => &ps.shift(1, -2, 0) + &p0.shift(-1, -1, 1),
                }
            }
        };
        self.memo
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| result.clone());
        result
    }

    #[cfg(feature = "parallel")]
    fn branches(
        &self,
        a: &PlanarDiagram,
        b: &PlanarDiagram,
        size: usize,
    ) -> (LaurentPoly2, LaurentPoly2) {
        if size >= PARALLEL_MIN_CROSSINGS {
            rayon::join(|| self.eval(a), || self.eval(b))
        } else {
            (self.eval(a), self.eval(b))
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn branches(
        &self,
        a: &PlanarDiagram,
        b: &PlanarDiagram,
        _size: usize,
    ) -> (LaurentPoly2, LaurentPoly2) {
        (self.eval(a), self.eval(b))
    }
}

#[cfg(feature = "parallel")]
const PARALLEL_MIN_CROSSINGS: usize = 14;

fn pick(bad: &[usize], strategy: Strategy) -> Option<usize> {
    match strategy {
        Strategy::FirstBad => bad.first().copied(),
        Strategy::LastBad => bad.last().copied(),
    }
}

pub(crate) struct DescendingPlan {
    /// Crossings first met as under-crossings, in traversal order.
    pub bad: Vec<usize>,
    pub components: usize,
}

/// Chooses component order and base points so that few crossings are met
/// from below first; those crossings are returned.
pub(crate) fn descending_plan(d: &PlanarDiagram) -> DescendingPlan {
    let ends = d.arc_ends();
    let comps = d.strand_components();
    let nc = d.crossing_count();
    let mut comp_of_arc = vec![0usize; d.arc_count()];
    for (i, comp) in comps.iter().enumerate() {
        for &a in comp {
            comp_of_arc[a as usize] = i;
        }
    }
    // component passing over / under at each crossing
    let mut over_comp = vec![0usize; nc];
    let mut under_comp = vec![0usize; nc];
    for (ci, c) in d.crossings().iter().enumerate() {
        under_comp[ci] = comp_of_arc[c.slots[0] as usize];
        over_comp[ci] = comp_of_arc[c.slots[c.over_in()] as usize];
    }

    // base point per component minimising self-crossings met from below
    let mut bases = Vec::with_capacity(comps.len());
    for (i, comp) in comps.iter().enumerate() {
        let mut best = (usize::MAX, 0);
        for b in 0..comp.len() {
            let mut seen = vec![false; nc];
            let mut bad = 0;
            for k in 0..comp.len() {
                let a = comp[(b + k) % comp.len()];
                let (ci, slot) = ends[a as usize].1;
                if over_comp[ci] != i || under_comp[ci] != i {
                    continue;
                }
                if !seen[ci] {
                    seen[ci] = true;
                    if slot == 0 {
                        bad += 1;
                    }
                }
            }
            if bad < best.0 {
                best = (bad, b);
            }
        }
        bases.push(best.1);
    }

    // stack components so that as few mixed crossings as possible are met
    // from below: under[i][j] counts crossings with i under j
    let k = comps.len();
    let mut under = vec![vec![0u32; k]; k];
    for c in 0..nc {
        if over_comp[c] != under_comp[c] {
            under[under_comp[c]][over_comp[c]] += 1;
        }
    }
    let order = best_order(&under);

    let mut rank = vec![0usize; comps.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let mut seen = vec![false; nc];
    let mut bad = Vec::new();
    for &i in &order {
        let comp = &comps[i];
        for k in 0..comp.len() {
            let a = comp[(bases[i] + k) % comp.len()];
            let (ci, slot) = ends[a as usize].1;
            if seen[ci] {
                continue;
            }
            seen[ci] = true;
            let under_first = if over_comp[ci] == under_comp[ci] {
                slot == 0
            } else {
                rank[under_comp[ci]] < rank[over_comp[ci]]
            };
            if under_first {
                bad.push(ci);
            }
        }
    }
    DescendingPlan {
        bad,
        components: comps.len(),
    }
}

/// Order of components minimising the crossings where an earlier component
/// passes under a later one. Exact over subsets for small counts.
fn best_order(under: &[Vec<u32>]) -> Vec<usize> {
    let k = under.len();
    if k > 16 {
        return (0..k).collect();
    }
    let full = 1usize << k;
    let mut cost = vec![u32::MAX; full];
    let mut last = vec![usize::MAX; full];
    cost[0] = 0;
    for mask in 0..full {
        if cost[mask] == u32::MAX {
            continue;
        }
        for j in (0..k).filter(|&j| mask & (1 << j) == 0) {
            let add: u32 = (0..k)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| under[i][j])
                .sum();
            let m2 = mask | (1 << j);
            if cost[mask] + add < cost[m2] {
                cost[m2] = cost[mask] + add;
                last[m2] = j;
            }
        }
    }
    let mut order = Vec::with_capacity(k);
    let mut mask = full - 1;
    while mask != 0 {
        let j = last[mask];
        order.push(j);
        mask &= !(1 << j);
    }
    order.reverse();
    order
}

/// HOMFLY with a fresh engine and the default crossing cap.
pub fn homfly(d: &PlanarDiagram) -> Result<LaurentPoly2, HomflyError> {
    HomflyEngine::new().homfly(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MortonReport {
    pub writhe: i32,
    pub seifert_circles: usize,
    pub e: i32,
    pub big_e: i32,
    pub lower: i32,
    pub upper: i32,
    pub pass: bool,
}

/// Checks `w - (s - 1) <= e <= E <= w + (s - 1)` for a diagram.
pub fn morton_check(engine: &HomflyEngine, d: &PlanarDiagram) -> Result<MortonReport, HomflyError> {
    let p = engine.homfly(d)?;
    Ok(morton_report(d, &p))
}

pub fn morton_report(d: &PlanarDiagram, p: &LaurentPoly2) -> MortonReport {
    let w = d.writhe();
    let s = seifert_circle_count(d) as i32;
    let (e, big_e) = p.v_range().expect("HOMFLY of a diagram is nonzero");
    let (lower, upper) = (w - (s - 1), w + (s - 1));
    MortonReport {
        writhe: w,
        seifert_circles: s as usize,
        e,
        big_e,
        lower,
        upper,
        pass: lower <= e && e <= big_e && big_e <= upper,
    }
}
