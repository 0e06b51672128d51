#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use trackforge::braid::BraidWord;
use trackforge::catalog::{bundled_text, ingest, Store};
use trackforge::track::{
    analyze, build_diagram, DoublePointLabel, GridPath, LabelledInterval, MarkedPoint, Move,
};
use trackforge::{HomflyEngine, PlanarDiagram};

pub const SHAPE: &str = include_str!("../../fixtures/fig17.track");

/// Two-point track table: labels, knot, 4-genus.
pub const TWO_POINT_TABLE: [(&str, &str, &str, i32); 24] = [
    ("b", "c", "7_2", 1),
    ("b", "c1", "5_2", 1),
    ("b", "d", "7_3", 2),
    ("b1", "b1", "9_46", 0),
    ("b1", "b3", "10_140", 0),
    ("b1", "c", "12n121", 1),
    ("b1", "c1", "3_1", 1),
    ("b1", "d", "10_145", 2),
    ("b3", "b3", "11n139", 0),
    ("b3", "c3", "10_133", 1),
    ("c", "c3", "8_15", 2),
    ("c", "d", "10_142", 3),
    ("c1", "b1", "8_21", 1),
    ("c1", "b3", "9_45", 1),
    ("c1", "c1", "5_1", 2),
    ("c1", "c3", "7_5", 2),
    ("c1", "d", "10_161", 3),
    ("c3", "b3", "10_131", 1),
    ("c3", "d", "10_128", 3),
    ("d", "b1", "11n118", 2),
    ("d", "b3", "12n407", 2),
    ("d", "c1", "7_1", 3),
    ("d", "c3", "10_134", 3),
    ("d", "d", "12n591", 4),
];

/// Quasipositive, non-positive knots: name, word, 4-genus, genus.
pub const QP_BRAIDS: [(&str, &str, i32, i32); 17] = [
    ("8_20", "(abAbaBA)(baB)", 0, 1),
    ("8_21", "(abA)b(Abba)", 1, 2),
    ("9_45", "a(Bcb)b(bacB)", 1, 2),
    ("9_46", "(abbcBBA)(bacB)", 0, 1),
    ("10_126", "aa(aaabAAA)b", 1, 3),
    ("10_127", "abbb(bAbbaB)", 2, 3),
    ("10_131", "a(aaBCbdBcbAA)(BcbdcBCb)d(Bcb)", 1, 2),
    ("10_133", "aab(bDCbcdB)(bCBcACbcdCBcaCbcB)(bCBcaCbcB)", 1, 2),
    ("10_140", "(abbbcBBBA)b(Cbc)", 0, 2),
    ("10_143", "a(BBBaaabbb)", 1, 3),
    ("10_145", "(abA)cd(abA)(bcB)(bcdCB)(cdC)b", 2, 2),
    ("10_148", "ab(bbacBB)(cbC)", 1, 3),
    ("10_149", "a(bbCbccBB)a(bcccB)", 2, 3),
    ("10_155", "(abA)(ABcbCba)(bcB)", 0, 3),
    ("10_157", "a(Baab)b(baaB)", 2, 3),
    ("10_159", "a(BBaabb)(baB)", 1, 3),
    ("10_166", "(abcBA)(acbA)(Bcb)(Aba)", 1, 2),
];

pub fn store(engine: &HomflyEngine) -> Store {
    ingest(&bundled_text(true), engine).unwrap()
}

pub fn shape() -> LabelledInterval {
    SHAPE.parse().unwrap()
}

pub fn shape_with(x: &str, y: &str) -> LabelledInterval {
    let mut c = shape();
    c.labels = vec![x.parse().unwrap(), y.parse().unwrap()];
    c
}

pub fn random_walk<R: Rng>(rng: &mut R, max_len: usize, max_points: usize) -> GridPath {
    loop {
        let len = rng.gen_range(1..=max_len);
        let mut moves = vec![Move::R];
        while moves.len() < len {
            let m = *[Move::U, Move::D, Move::L, Move::R].choose(rng).unwrap();
            if m != moves.last().unwrap().opposite() {
                moves.push(m);
            }
        }
        let p = GridPath::new(moves);
        let (sk, diag) = analyze(&p);
        if diag.is_ok() && sk.double_points.len() <= max_points {
            return p;
        }
    }
}

/// Random valid interval: every cycle of the skeleton gets a mark, plus up
/// to `extra` further marks on random steps.
pub fn random_interval<R: Rng>(
    rng: &mut R,
    max_len: usize,
    max_points: usize,
    extra: usize,
) -> LabelledInterval {
    let path = random_walk(rng, max_len, max_points);
    let (sk, _) = analyze(&path);
    let m = path.len();
    let mut vertex_at = vec![(0usize, 0usize); 0];
    vertex_at.push((0, 0));
    vertex_at.push((m, 1));
    for (k, dp) in sk.double_points.iter().enumerate() {
        vertex_at.push((dp.first, 2 + k));
        vertex_at.push((dp.second, 2 + k));
    }
    vertex_at.sort();
    let mut edges: Vec<(usize, usize, usize, usize)> = vertex_at
        .windows(2)
        .map(|w| (w[0].0, w[1].0, w[0].1, w[1].1))
        .collect();
    edges.shuffle(rng);
    let n = 2 + sk.double_points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut marks = Vec::new();
    for &(s, e, u, v) in &edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            marks.push(MarkedPoint::at(rng.gen_range(s..e)));
        } else {
            parent[ru] = rv;
        }
    }
    for _ in 0..rng.gen_range(0..=extra) {
        if m > 0 {
            let mk = MarkedPoint::at(rng.gen_range(0..m));
            if !marks.contains(&mk) {
                marks.push(mk);
            }
        }
    }
    marks.sort();
    let labels = (0..sk.double_points.len())
        .map(|_| *DoublePointLabel::ALL.choose(rng).unwrap())
        .collect();
    let c = LabelledInterval::new(path, labels, marks);
    assert!(c.validate().is_ok(), "{c}");
    c
}

/// Random oriented diagram with at most `max_crossings` crossings: a track
/// diagram, a braid closure or a catalog diagram, with random crossings
/// switched.
pub fn random_diagram<R: Rng>(rng: &mut R, store: &Store, max_crossings: usize) -> PlanarDiagram {
    let d = loop {
        let d = match rng.gen_range(0..3) {
            0 => {
                build_diagram(&random_interval(rng, 14, 2, 2))
                    .unwrap()
                    .diagram
            }
            1 => {
                let strands = rng.gen_range(2..=4u32);
                let len = rng.gen_range(1..=max_crossings);
                let text: String = (0..len)
                    .map(|_| {
                        let i = rng.gen_range(0..strands - 1) as u8;
                        if rng.gen_bool(0.5) {
                            (b'a' + i) as char
                        } else {
                            (b'A' + i) as char
                        }
                    })
                    .collect();
                BraidWord::parse_with_strands(&text, strands)
                    .unwrap()
                    .closure()
            }
            _ => {
                let e = store.entries.choose(rng).unwrap();
                e.encoding.diagram().unwrap()
            }
        };
        if d.crossing_count() <= max_crossings {
            break d;
        }
    };
    let mut d = d;
    for i in 0..d.crossing_count() {
        if rng.gen_bool(0.3) {
            d = d.switch_crossing(i);
        }
    }
    d
}

/// Reduced walks of the given length starting with `R` that have exactly
/// one double point.
pub fn walks_with_one_point(len: usize) -> Vec<GridPath> {
    let dirs = [Move::U, Move::D, Move::L, Move::R];
    let mut out = Vec::new();
    let total = 4usize.pow(len as u32 - 1);
    for code in 0..total {
        let mut moves = vec![Move::R];
        let mut k = code;
        for _ in 1..len {
            moves.push(dirs[k % 4]);
            k /= 4;
        }
        if moves.windows(2).any(|w| w[1] == w[0].opposite()) {
            continue;
        }
        let p = GridPath::new(moves);
        let (sk, diag) = analyze(&p);
        if diag.is_ok() && sk.double_points.len() == 1 {
            out.push(p);
        }
    }
    out
}
