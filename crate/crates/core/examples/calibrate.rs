//! Scores every sign convention against the two-point track table on a
//! shape (the bundled fixture by default).
//!
//! cargo run --release -p trackforge --example calibrate -- [shape.track]

use trackforge::catalog::{bundled_text, ingest};
use trackforge::track::{build_with, Anchor, Convention, LabelledInterval};
use trackforge::HomflyEngine;

const ROWS: [(&str, &str, &str); 24] = [
    ("b", "c", "7_2"),
    ("b", "c1", "5_2"),
    ("b", "d", "7_3"),
    ("b1", "b1", "9_46"),
    ("b1", "b3", "10_140"),
    ("b1", "c", "12n121"),
    ("b1", "c1", "3_1"),
    ("b1", "d", "10_145"),
    ("b3", "b3", "11n139"),
    ("b3", "c3", "10_133"),
    ("c", "c3", "8_15"),
    ("c", "d", "10_142"),
    ("c1", "b1", "8_21"),
    ("c1", "b3", "9_45"),
    ("c1", "c1", "5_1"),
    ("c1", "c3", "7_5"),
    ("c1", "d", "10_161"),
    ("c3", "b3", "10_131"),
    ("c3", "d", "10_128"),
    ("d", "b1", "11n118"),
    ("d", "b3", "12n407"),
    ("d", "c1", "7_1"),
    ("d", "c3", "10_134"),
    ("d", "d", "12n591"),
];

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable shape file"),
        None => include_str!("../fixtures/fig17.track").to_string(),
    };
    let shape: LabelledInterval = text.parse().expect("valid shape file");
    let engine = HomflyEngine::new();
    let store = ingest(&bundled_text(true), &engine).unwrap();

    let mut scores = Vec::new();
    for anchor in [Anchor::Absolute, Anchor::Relative] {
        for c_minus in 0..4 {
            for b_minus in 0..4 {
                for a_minus in 0..2 {
                    let conv = Convention {
                        anchor,
                        c_minus,
                        b_minus,
                        a_minus,
                    };
                    let hits = ROWS
                        .iter()
                        .filter(|(x, y, name)| {
                            let mut c = shape.clone();
                            c.labels = vec![x.parse().unwrap(), y.parse().unwrap()];
                            let p = engine
                                .homfly(&build_with(&c, &conv).unwrap().diagram)
                                .unwrap();
                            store.identify(&p).iter().any(|n| n == name)
                        })
                        .count();
                    scores.push((hits, conv));
                }
            }
        }
    }
    scores.sort_by_key(|s| std::cmp::Reverse(s.0));
    for (hits, conv) in scores.iter().take(10) {
        let mark = if *conv == Convention::CALIBRATED {
            "  (calibrated)"
        } else {
            ""
        };
        println!("{hits:>2}/24  {conv:?}{mark}");
    }
}
