use std::time::Instant;

use trackforge::catalog::{bundled_text, check_strong_quasipositivity, ingest};
use trackforge::HomflyEngine;

#[test]
fn bundled_catalog_ingests() {
    let t = Instant::now();
    let engine = HomflyEngine::new();
    let store = ingest(&bundled_text(true), &engine).unwrap();
    eprintln!("ingest: {} entries in {:?}", store.len(), t.elapsed());
    assert_eq!(store.len(), 255);
    for e in &store.entries {
        let p = e.homfly.as_ref().unwrap();
        assert!(p.has_knot_shape(), "{}", e.name);
        let names = store.identify(p);
        assert!(names.contains(&e.name), "{}", e.name);
    }
    for (name, r) in store.morton_reports() {
        assert!(r.pass, "{name}: {r:?}");
    }
    eprintln!("collisions: {:?}", store.collisions());
    let r = check_strong_quasipositivity(&store);
    assert!(
        r.all_consistent(),
        "{:?}",
        r.rows.iter().filter(|x| !x.consistent).collect::<Vec<_>>()
    );
}

const REFERENCE: &str = include_str!("data/reference_homfly.txt");

/// Independent polynomials from a public knot table, computed by other
/// software, compared with our skein engine on braid closures and PD codes.
#[test]
fn matches_reference_table() {
    use trackforge::{BraidWord, LaurentPoly2};
    let engine = HomflyEngine::new();
    let store = ingest(&bundled_text(false), &engine).unwrap();
    let mut checked = 0;
    for line in REFERENCE.lines().filter(|l| !l.starts_with('#')) {
        let f: Vec<&str> = line.split(" | ").collect();
        let expected: LaurentPoly2 = f[2].parse().unwrap();
        let d = BraidWord::parse(f[1]).unwrap().closure();
        assert_eq!(engine.homfly(&d).unwrap(), expected, "braid {}", f[0]);
        let ours = store.homfly_of(f[0]).unwrap();
        assert!(
            *ours == expected || ours.mirror_transform() == expected,
            "pd {}",
            f[0]
        );
        checked += 1;
    }
    assert_eq!(checked, 249);
}
