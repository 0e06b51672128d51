mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trackforge::braid::{embedded_band, QPWord};
use trackforge::catalog::catalog_name;
use trackforge::seifert::seifert_circle_count;
use trackforge::track::build_diagram;
use trackforge::yamada::yamada_braid;
use trackforge::{BraidWord, HomflyEngine};

use common::*;

#[test]
fn quasipositive_table() {
    let engine = HomflyEngine::new().with_cap(40);
    let store = store(&HomflyEngine::new());
    for (name, word, g4, _) in QP_BRAIDS {
        let q = QPWord::parse(word).unwrap();
        assert_eq!(q.band_count() as i32, q.word.writhe(), "{name}");
        assert_eq!(q.qp_genus().unwrap(), g4, "{name}: {}", q.bands_text());
        let p = engine.homfly(&q.word.closure()).unwrap();
        assert!(
            store.identify(&p).iter().any(|n| n == catalog_name(name)),
            "{name}"
        );
    }
}

#[test]
fn band_examples() {
    let q = QPWord::parse("(abA)b(Abba)").unwrap();
    assert_eq!(q.bands_text(), "(abA)(b)(Aba)(Aba)");
    assert_eq!(q.qp_genus().unwrap(), 1);
    let q = QPWord::parse("a(Bcb)b(bacB)").unwrap();
    assert_eq!(q.band_count(), 5);
    assert_eq!(q.word.strands, 4);
    let q = QPWord::parse("(abA)cd(abA)(bcB)(bcdCB)(cdC)b").unwrap();
    assert_eq!((q.band_count(), q.word.strands), (8, 5));
    assert_eq!(q.qp_genus().unwrap(), 2);
    let q = QPWord::parse("a").unwrap();
    assert_eq!(q.qp_genus().unwrap(), 0);
}

#[test]
fn embedded_bands_are_single_bands() {
    for j in 2..7 {
        for i in 1..j {
            let w = embedded_band(i, j);
            let q = QPWord::from_word(w.clone()).unwrap();
            assert_eq!(q.band_count(), 1, "s({i},{j}) = {w}");
        }
    }
}

#[test]
fn closure_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let engine = HomflyEngine::new();
    let store = store(&engine);
    for _ in 0..30 {
        let d = random_diagram(&mut rng, &store, 10);
        let b = yamada_braid(&d).unwrap();
        let c = b.closure();
        assert_eq!(c.crossing_count(), b.len());
        assert_eq!(c.writhe(), b.writhe());
        assert_eq!(seifert_circle_count(&c), b.strands as usize);
    }
    let b = BraidWord::parse("").unwrap();
    assert_eq!(b.closure().component_count(), 1);
}

#[test]
fn yamada_on_random_diagrams() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let engine = HomflyEngine::new();
    let store = store(&engine);
    for _ in 0..60 {
        let d = random_diagram(&mut rng, &store, 12);
        let b = yamada_braid(&d).unwrap();
        assert_eq!(b.writhe(), d.writhe());
        assert_eq!(b.strands as usize, seifert_circle_count(&d));
        let big = HomflyEngine::new().with_cap(40);
        assert_eq!(
            big.homfly(&b.closure()).unwrap(),
            engine.homfly(&d).unwrap()
        );
    }
}

#[test]
fn yamada_on_track_diagrams() {
    let big = HomflyEngine::new().with_cap(40);
    for (x, y, _, _) in TWO_POINT_TABLE.iter().take(6) {
        let d = build_diagram(&shape_with(x, y)).unwrap().diagram;
        let b = yamada_braid(&d).unwrap();
        assert_eq!(b.strands, 5);
        assert_eq!(b.writhe(), d.writhe());
        assert_eq!(big.homfly(&b.closure()).unwrap(), big.homfly(&d).unwrap());
    }
}
