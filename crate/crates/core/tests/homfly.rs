mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trackforge::homfly::{morton_check, Strategy};
use trackforge::{HomflyEngine, LaurentPoly2, PlanarDiagram};

use common::*;

fn skein_holds(engine: &HomflyEngine, d: &PlanarDiagram, i: usize) -> bool {
    let p = engine.homfly(d).unwrap();
    let q = engine.homfly(&d.switch_crossing(i)).unwrap();
    let s = engine.homfly(&d.smooth_crossing(i)).unwrap();
    let (plus, minus) = if d.crossings()[i].sign.value() > 0 {
        (p, q)
    } else {
        (q, p)
    };
    &plus.shift(1, -1, 0) - &minus.shift(1, 1, 0) == s.shift(1, 0, 1)
}

#[test]
fn skein_at_every_crossing() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let engine = HomflyEngine::new();
    let store = store(&engine);
    for _ in 0..25 {
        let d = random_diagram(&mut rng, &store, 11);
        for i in 0..d.crossing_count() {
            assert!(skein_holds(&engine, &d, i), "crossing {i}");
        }
    }
}

#[test]
fn strategy_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let a = HomflyEngine::new();
    let b = HomflyEngine::new().with_strategy(Strategy::LastBad);
    let store = store(&a);
    for _ in 0..25 {
        let d = random_diagram(&mut rng, &store, 12);
        assert_eq!(a.homfly(&d).unwrap(), b.homfly(&d).unwrap());
        assert_eq!(
            a.homfly(&d).unwrap(),
            HomflyEngine::new().homfly(&d).unwrap()
        );
    }
}

#[test]
fn unknot_and_unlinks() {
    let e = HomflyEngine::new();
    assert_eq!(
        e.homfly(&PlanarDiagram::unknot()).unwrap(),
        LaurentPoly2::one()
    );
    let mu = LaurentPoly2::split_factor();
    assert_eq!(e.homfly(&PlanarDiagram::unlink(3)).unwrap(), mu.pow(2));
}

#[test]
fn morton_on_random_diagrams() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let engine = HomflyEngine::new();
    let store = store(&engine);
    for _ in 0..50 {
        let d = random_diagram(&mut rng, &store, 12);
        let r = morton_check(&engine, &d).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn mirror_and_reverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let engine = HomflyEngine::new();
    let store = store(&engine);
    for _ in 0..20 {
        let d = random_diagram(&mut rng, &store, 12);
        let p = engine.homfly(&d).unwrap();
        assert_eq!(engine.homfly(&d.mirror()).unwrap(), p.mirror_transform());
        assert_eq!(engine.homfly(&d.reversed()).unwrap(), p);
    }
}

#[test]
fn connected_sum_multiplies() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let engine = HomflyEngine::new();
    let store = store(&engine);
    for _ in 0..15 {
        let a = random_diagram(&mut rng, &store, 7);
        let b = random_diagram(&mut rng, &store, 7);
        if a.component_count() != 1 || b.component_count() != 1 {
            continue;
        }
        let s = a.connected_sum(&b).unwrap();
        assert_eq!(
            engine.homfly(&s).unwrap(),
            &engine.homfly(&a).unwrap() * &engine.homfly(&b).unwrap()
        );
    }
}
