use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/fig17.track")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trackforge"))
        .args(args)
        .env_remove("TRACKFORGE_CATALOG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn with_labels(dir: &TempDir, labels: &str) -> PathBuf {
    let text = fs::read_to_string(fixture()).unwrap();
    let text: String = text
        .lines()
        .map(|l| {
            if l.starts_with("labels") {
                format!("labels = {labels}\n")
            } else {
                format!("{l}\n")
            }
        })
        .collect();
    let p = dir
        .path()
        .join(format!("{}.track", labels.replace(", ", "_")));
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn enumerate_reports_24_knots() {
    let f = fixture();
    let o = run(&["enumerate", "--shape", f.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 121 + 1);
    assert!(out
        .lines()
        .last()
        .unwrap()
        .starts_with("121 labellings, 24 distinct knots identified"));
    let row = out.lines().find(|l| l.starts_with("b,c1 ")).unwrap();
    assert!(row.contains("5_2"), "{row}");
}

#[test]
fn enumerate_records_are_deterministic() {
    let f = fixture();
    let a = run(&[
        "enumerate",
        "--shape",
        f.to_str().unwrap(),
        "--format",
        "records",
        "--workers",
        "1",
    ]);
    let b = run(&[
        "enumerate",
        "--shape",
        f.to_str().unwrap(),
        "--format",
        "records",
        "--workers",
        "4",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
    let lines: Vec<serde_json::Value> = stdout(&a)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 122);
    assert_eq!(lines[121]["distinct_knots"], 24);
}

#[test]
fn bounds_of_b_d() {
    let dir = TempDir::new().unwrap();
    let p = with_labels(&dir, "b, d");
    let o = run(&["bounds", p.to_str().unwrap(), "--format", "records"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["four_genus"], 2);
}

#[test]
fn validate_reports_unbroken_cycle() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("loop.track");
    fs::write(&p, "path = RRRUULDDD\nlabels = c\nmarks =\n").unwrap();
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("cycle not broken"));
    let ok = run(&["validate", fixture().to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["homfly", "--cap", "0", "--braid", "a"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["homfly", "--braid", "aaa", "--format", "svg"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn homfly_identify_and_braid_inputs() {
    let o = run(&["identify", "--braid", "aaa"]);
    assert_eq!(stdout(&o).trim(), "3_1");
    let dir = TempDir::new().unwrap();
    let pd = dir.path().join("fig8.pd");
    fs::write(&pd, "PD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]\n").unwrap();
    let o = run(&["identify", pd.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "4_1");
    let o = run(&["certify", pd.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["braid", pd.to_str().unwrap(), "--format", "records"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["strands"], 3);
    assert_eq!(v["writhe"], 0);
}

#[test]
fn certificate_round_trip_through_braid() {
    let dir = TempDir::new().unwrap();
    let p = with_labels(&dir, "b1, c1");
    let o = run(&["certify", p.to_str().unwrap()]);
    assert!(o.status.success());
    let cert = dir.path().join("cert.txt");
    fs::write(&cert, stdout(&o)).unwrap();
    let o = run(&[
        "braid",
        p.to_str().unwrap(),
        "--cert",
        cert.to_str().unwrap(),
        "--format",
        "records",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let q = run(&[
        "qp-parse",
        v["bands"].as_str().unwrap(),
        "--format",
        "records",
    ]);
    let q: serde_json::Value = serde_json::from_str(stdout(&q).trim()).unwrap();
    assert_eq!(q["four_genus"], 1);
}

#[test]
fn qp_parse_table_word() {
    let o = run(&["qp-parse", "(abA)cd(abA)(bcB)(bcdCB)(cdC)b"]);
    let out = stdout(&o);
    assert!(out.contains("band count: 8"));
    assert!(out.contains("four genus: 2"));
}

#[test]
fn catalog_ingest_is_idempotent() {
    let dir = TempDir::new().unwrap();
    let cat = dir.path().join("cat.txt");
    fs::write(
        &cat,
        "3_1 | 3a1 | braid:aaa | 1 | 1 | positive=Y\n4_1 | 4a1 | braid:aBaB | 1 | 1 |\n",
    )
    .unwrap();
    let s1 = dir.path().join("s1.txt");
    let s2 = dir.path().join("s2.txt");
    assert!(run(&[
        "catalog-ingest",
        cat.to_str().unwrap(),
        "-o",
        s1.to_str().unwrap()
    ])
    .status
    .success());
    assert!(run(&[
        "catalog-ingest",
        s1.to_str().unwrap(),
        "-o",
        s2.to_str().unwrap()
    ])
    .status
    .success());
    assert_eq!(fs::read(&s1).unwrap(), fs::read(&s2).unwrap());
    let o = Command::new(env!("CARGO_BIN_EXE_trackforge"))
        .args(["identify", "--braid", "aaa"])
        .env("TRACKFORGE_CATALOG", &s1)
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "3_1");
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "x | y | pd:[1,2,3 | | |\n").unwrap();
    assert_eq!(
        run(&["catalog-ingest", bad.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn strong_qp_check_passes() {
    let o = run(&["check-prop1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out
        .lines()
        .any(|l| l.starts_with("10_145") && l.contains("strongly qp: true")));
    assert!(out
        .lines()
        .any(|l| l.starts_with("8_20") && l.contains("strongly qp: false")));
}

#[test]
fn render_writes_svg() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("fig.svg");
    let o = run(&[
        "render",
        fixture().to_str().unwrap(),
        "--diagram",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let svg = fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 1 + 2 + 12);
    let o = run(&["render", "--braid", "abAB"]);
    assert!(stdout(&o).contains("</svg>"));
}
