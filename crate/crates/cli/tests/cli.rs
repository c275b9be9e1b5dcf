use std::path::Path;
use std::process::{Command, Output};

use mub_core::constructions::{triple_exact, Triple};
use mub_lab::io::{import, DataFile};
use mub_lab::report::ReportDocument;

fn mub_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mub-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn theorem1_on_t0_is_unextendible() {
    let o = mub_lab(&["reproduce", "theorem1", "--triple", "T0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("seed: 0"));
    assert!(s.contains("verdict: unextendible"), "{s}");
}

#[test]
fn forty_eight_vectors_reproduce() {
    let o = mub_lab(&["reproduce", "grassl48", "--restarts", "100000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("seed: 7"));
    assert!(s.contains("verdict: 48 clusters"), "{s}");
}

#[test]
fn reproduce_reruns_to_the_same_report() {
    let args = ["--json", "--seed", "3", "reproduce", "theorem2", "--grid", "60"];
    let a = ReportDocument::from_json(&stdout(&mub_lab(&args))).unwrap();
    let b = ReportDocument::from_json(&stdout(&mub_lab(&args))).unwrap();
    assert_eq!(a.verdict, "excluded");
    assert_eq!(a.seed, 3);
    assert_eq!(a.payload, b.payload);
}

#[test]
fn c3six_lists_six_vectors() {
    let o = mub_lab(&["reproduce", "c3six"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: 6 vectors"));
}

#[test]
fn broken_basis_fails_verification_with_offender() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "broken.json",
        r#"{"schema_version": "1", "dim": 2,
            "bases": [[[[1, 0], [0, 0]], [[0.6, 0], [0.8, 0]]]]}"#,
    );
    let o = mub_lab(&["verify", "--file", &f]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("worst pair: basis 0 column 0 / basis 0 column 1"), "{s}");
    assert!(s.contains("verdict: invalid"));
}

#[test]
fn valid_file_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t1.json").display().to_string();
    let e = mub_lab(&["export", "triple", "T1", "--out", &out]);
    assert_eq!(e.status.code(), Some(0), "{}", stderr(&e));
    for mode in ["float", "exact"] {
        let o = mub_lab(&["--mode", mode, "verify", "--file", &out]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("verdict: valid"));
    }
}

#[test]
fn short_vector_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "short.json",
        r#"{"schema_version": "1", "dim": 2, "states": [[[0.9, 0], [0, 0]]]}"#,
    );
    let o = mub_lab(&["verify", "--file", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("states[0]: norm 0.9"), "{}", stderr(&o));
}

#[test]
fn malformed_json_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", "{\n \"schema_version\": \"1\",\n \"dim\": 3,\n \"bases\": [[1, 2]\n}");
    let o = mub_lab(&["verify", "--file", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line "), "{}", stderr(&o));
}

#[test]
fn bad_flags_and_verbs_exit_2() {
    assert_eq!(mub_lab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mub_lab(&["--tol", "-1", "construct", "triple", "T0"]).status.code(), Some(2));
    assert_eq!(mub_lab(&["construct", "basis", "--dim", "4", "--label", "z"]).status.code(), Some(2));
    assert_eq!(mub_lab(&["--mode", "exact", "export", "pair", "P1"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_mub-lab"))
        .args(["reproduce", "c3six"])
        .env("MUB_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exported_triple_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t0.json");
    let o = mub_lab(&["--mode", "exact", "export", "triple", "T0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let f = import(&out).unwrap();
    let (bases, _) = f.exact_objects().unwrap();
    let expected = triple_exact(Triple::T0);
    assert_eq!(bases.len(), 3);
    for (b, e) in bases.iter().zip(&expected) {
        assert_eq!(b.columns, e.basis().columns);
    }
    assert_eq!(f.metadata.labels[0][4], "1_z,1_z");
    // and the text form survives a second pass unchanged
    assert_eq!(DataFile::parse(&f.to_json()).unwrap(), f);
}

#[test]
fn exported_hy_entries_are_cube_roots() {
    let o = mub_lab(&["export", "basis", "--dim", "3", "--label", "y"]);
    assert_eq!(o.status.code(), Some(0));
    let f = DataFile::parse(&stdout(&o)).unwrap();
    // columns (1, ω, ω), (1, ω², 1), (1, 1, ω²) over √3
    let exponents = [[0, 1, 1], [0, 2, 0], [0, 0, 2]];
    let s = 1.0 / 3f64.sqrt();
    for (col, exps) in f.bases[0].iter().zip(exponents) {
        for (e, k) in col.iter().zip(exps) {
            let angle = std::f64::consts::TAU * k as f64 / 3.0;
            assert!((e[0] - s * angle.cos()).abs() < 1e-15 && (e[1] - s * angle.sin()).abs() < 1e-15);
        }
    }
}

#[test]
fn search_reports_and_checks_expectations() {
    let o = mub_lab(&["--restarts", "50", "search", "--target", "T1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: 0 clusters"));
    let o = mub_lab(&["--restarts", "50", "search", "--target", "T1", "--expect", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = mub_lab(&["search"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constellation_is_constructed_and_checked() {
    let o = mub_lab(&["construct", "constellation", "--states", "0_y:0_y,0_y:1_y,1_y:0_w,1_y:1_w"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("shape S2"));
    assert!(stdout(&o).contains("verdict: valid constellation"));
    let o = mub_lab(&["construct", "constellation", "--states", "0_y:0_x,0_y:1_x,1_y:0_w,1_y:1_w"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_report_round_trips_through_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = mub_lab(&["--json", "--out", out.to_str().unwrap(), "construct", "pair", "P2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let doc = ReportDocument::from_json(&text).unwrap();
    assert_eq!(doc.verdict, "pairwise mutually unbiased");
    assert_eq!(doc, ReportDocument::from_json(&doc.to_json()).unwrap());
    assert_eq!(doc, ReportDocument::from_json(&stdout(&o)).unwrap());
}
