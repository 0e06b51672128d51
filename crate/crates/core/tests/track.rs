mod common;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trackforge::seifert::seifert_circle_count;
use trackforge::track::{
    bounds, build_diagram, enumerate_labellings, glue, relaxed_build, DoublePointLabel, GridPath,
    LabelledInterval, PatternType,
};
use trackforge::{HomflyEngine, LaurentPoly2};

use common::*;

#[test]
fn fixture_round_trips() {
    let c = shape();
    assert_eq!(c.to_string().parse::<LabelledInterval>().unwrap(), c);
    assert!(c.validate().is_ok());
    assert_eq!(c.skeleton().double_points.len(), 2);
    assert_eq!(c.marks.len(), 2);
}

#[test]
fn two_point_table() {
    let engine = HomflyEngine::new();
    let store = store(&engine);
    for (x, y, name, g4) in TWO_POINT_TABLE {
        let c = shape_with(x, y);
        let t = build_diagram(&c).unwrap();
        let ids = store.identify(&engine.homfly(&t.diagram).unwrap());
        assert!(
            ids.iter().any(|n| n == name),
            "({x},{y}) gave {ids:?}, expected {name}"
        );
        let b = bounds(&c).unwrap();
        assert_eq!(b.four_genus, g4, "({x},{y})");
        assert_eq!(b.gordian.is_some(), b.b == 0);
    }
}

#[test]
fn enumeration_gives_24_knots() {
    let engine = HomflyEngine::new();
    let store = store(&engine);
    let c = shape();
    let all: Vec<LabelledInterval> = enumerate_labellings(&c.path, &c.marks).unwrap().collect();
    assert_eq!(all.len(), 121);
    let mut classes = BTreeSet::new();
    for l in &all {
        let t = build_diagram(l).unwrap();
        let p = engine.homfly(&t.diagram).unwrap();
        let ids = store.identify(&p);
        if p == LaurentPoly2::one() {
            continue;
        }
        if ids.is_empty() {
            assert!(is_catalog_product(&store, &p), "{l}");
        } else {
            classes.insert(ids);
        }
        let (e, _) = p.v_range().unwrap();
        assert!(e >= 2 * bounds(l).unwrap().four_genus, "{l}");
    }
    assert_eq!(classes.len(), 24, "{classes:?}");
}

fn is_catalog_product(store: &trackforge::catalog::Store, p: &LaurentPoly2) -> bool {
    let polys: Vec<LaurentPoly2> = store
        .entries
        .iter()
        .filter(|e| e.name != "0_1")
        .flat_map(|e| {
            let h = e.homfly.clone().unwrap();
            [h.mirror_transform(), h]
        })
        .collect();
    polys.iter().any(|a| polys.iter().any(|b| &(a * b) == p))
}

#[test]
fn reversal_keeps_every_knot() {
    let engine = HomflyEngine::new();
    let c = shape();
    for l in enumerate_labellings(&c.path, &c.marks).unwrap() {
        let a = engine.homfly(&build_diagram(&l).unwrap().diagram).unwrap();
        let b = engine
            .homfly(&build_diagram(&l.reversed()).unwrap().diagram)
            .unwrap();
        assert_eq!(a, b, "{l}");
    }
}

#[test]
fn construction_formulas_on_random_intervals() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..250 {
        let c = random_interval(&mut rng, 24, 4, 3);
        let t = build_diagram(&c).unwrap();
        let [a, b, cc, dd] = c.counts();
        let r = c.marks.len();
        let d = &t.diagram;
        assert_eq!(d.crossing_count(), 4 * (a + b + cc + dd) + 2 * r, "{c}");
        assert_eq!(d.writhe(), (2 * cc + 4 * dd + 2 * r) as i32, "{c}");
        let s = seifert_circle_count(d);
        assert_eq!(s, 2 * r + 1, "{c}");
        assert_eq!(d.component_count(), 1);
        let bd = bounds(&c).unwrap();
        assert_eq!(bd.slice_bennequin_bound, bd.four_genus);
        assert_eq!((1 - s as i32 + d.writhe()) / 2, (cc + 2 * dd) as i32);
    }
}

#[test]
fn glue_is_connected_sum() {
    let engine = HomflyEngine::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let c1 = random_interval(&mut rng, 10, 1, 1);
        let c2 = random_interval(&mut rng, 10, 1, 1);
        let g = glue(&c1, &c2).unwrap();
        assert!(g.validate().is_ok());
        let h = |c: &LabelledInterval| engine.homfly(&build_diagram(c).unwrap().diagram).unwrap();
        assert_eq!(h(&g), &h(&c1) * &h(&c2), "{c1}\n{c2}");
        assert_eq!(
            bounds(&g).unwrap().four_genus,
            bounds(&c1).unwrap().four_genus + bounds(&c2).unwrap().four_genus
        );
    }
}

#[test]
fn glue_trefoils_and_empty() {
    let engine = HomflyEngine::new().with_cap(24);
    let store = store(&engine);
    let t = shape_with("b1", "c1");
    let g = glue(&t, &t).unwrap();
    let p = engine.homfly(&build_diagram(&g).unwrap().diagram).unwrap();
    let q = store.homfly_of("3_1").unwrap();
    assert!(p == q * q || p == (q * q).mirror_transform());
    let empty = LabelledInterval::new(GridPath::new(vec![]), vec![], vec![]);
    let e = glue(&t, &empty).unwrap();
    assert_eq!(
        engine.homfly(&build_diagram(&e).unwrap().diagram).unwrap(),
        engine.homfly(&build_diagram(&t).unwrap().diagram).unwrap()
    );
}

#[test]
fn glue_is_associative() {
    let engine = HomflyEngine::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let a = random_interval(&mut rng, 8, 1, 0);
        let b = random_interval(&mut rng, 8, 1, 0);
        let c = random_interval(&mut rng, 8, 1, 0);
        let h = |c: &LabelledInterval| engine.homfly(&build_diagram(c).unwrap().diagram).unwrap();
        let left = glue(&glue(&a, &b).unwrap(), &c).unwrap();
        let right = glue(&a, &glue(&b, &c).unwrap()).unwrap();
        assert_eq!(h(&left), h(&right));
    }
}

/// Without twists a single clasp can leave the knot trivial.
#[test]
fn unmarked_clasp_can_be_unknotted() {
    let engine = HomflyEngine::new();
    let mut found = None;
    'search: for len in 4..=10 {
        for p in walks_with_one_point(len) {
            for rot in 0..4 {
                let label = DoublePointLabel::new(PatternType::C, rot);
                let c = LabelledInterval::new(p.clone(), vec![label], vec![]);
                let (t, upper) = relaxed_build(&c).unwrap();
                assert_eq!(upper, 1);
                if engine.homfly(&t.diagram).unwrap() == LaurentPoly2::one() {
                    found = Some(c);
                    break 'search;
                }
            }
        }
    }
    let c = found.expect("some unmarked clasp interval is unknotted");
    assert!(c
        .validate()
        .violations
        .iter()
        .any(|v| v.to_string().contains("cycle not broken")));
}

#[test]
fn relaxed_build_matches_build() {
    let c = shape_with("c", "d");
    let (t, upper) = relaxed_build(&c).unwrap();
    assert_eq!(t.diagram, build_diagram(&c).unwrap().diagram);
    assert_eq!(upper, 3);
}
