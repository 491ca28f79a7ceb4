use std::io::Write;
use std::process::{Command, Output, Stdio};

use heisen::io::{from_json, from_json_stream, to_json, ClassificationFile, DecompositionFile, FormFile, VerificationFile, WeylReportFile};
use heisen::heisenberg::Summary;

fn heisen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heisen")).args(args).env_remove("HEISEN_MAX_ORDER").output().unwrap()
}

fn heisen_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_heisen"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn check_reports_pairing() {
    let o = heisen(&["check", "Z/4 x Z/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "no: invariant factors do not pair up");

    let o = heisen(&["check", "Z/2 x Z/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("yes"));

    // Z/2 x Z/3 x Z/2 x Z/3 canonicalizes to Z/6 x Z/6
    let o = heisen(&["check", "Z/2 * Z/3 * Z/2 * Z/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("A = Z/6"));
}

#[test]
fn malformed_input_exits_2() {
    let o = heisen(&["check", "Z/4 x Y/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Y/2"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.json", r#"{"group": "Z/2 x Z/2", "q": [[0, 1], [0, 0]]}"#);
    let o = heisen(&["reduce", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(0, 1)"), "{}", stderr(&o));

    let broken = write_temp(&dir, "broken.json", r#"{"group": "Z/2 x Z/2", "q": "#);
    assert_eq!(heisen(&["reduce", &broken]).status.code(), Some(2));
    assert_eq!(heisen(&["reduce", "/nonexistent/form.json"]).status.code(), Some(2));

    let degenerate = write_temp(&dir, "zero.json", r#"{"group": "Z/2 x Z/2", "q": [[0, 0], [0, 0]]}"#);
    let o = heisen(&["reduce", &degenerate]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degenerate"));

    assert_eq!(heisen(&["classify", "--order", "0"]).status.code(), Some(2));
    assert_eq!(heisen(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn reduce_standard_form() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_temp(&dir, "f.json", r#"{"group": "Z/2 x Z/2", "q": [[0, 1], [1, 0]]}"#);
    let o = heisen(&["reduce", &form]);
    assert_eq!(o.status.code(), Some(0));
    let d: DecompositionFile = from_json(&stdout(&o)).unwrap();
    assert_eq!(d.base, "Z/2");
}

#[test]
fn enumerate_reduce_verify_round_trip() {
    for group in ["Z/2 x Z/2", "Z/3 x Z/3", "Z/6 x Z/6", "Z/4 x Z/4 x Z/2 x Z/2"] {
        let o = heisen(&["enumerate", group, "--nondegenerate"]);
        assert_eq!(o.status.code(), Some(0));
        let forms = stdout(&o);
        let count = forms.lines().count();
        assert!(count > 0);

        let reduced = heisen_stdin(&["reduce", "-"], &forms);
        assert_eq!(reduced.status.code(), Some(0), "{}", stderr(&reduced));
        let decs = stdout(&reduced);
        assert_eq!(decs.lines().count(), count);

        let dir = tempfile::tempdir().unwrap();
        let f = write_temp(&dir, "forms.jsonl", &forms);
        let d = write_temp(&dir, "decs.jsonl", &decs);
        let v = heisen(&["verify", &f, &d]);
        assert_eq!(v.status.code(), Some(0), "{group}: {}", stderr(&v));
        let verdicts: Vec<VerificationFile> = from_json_stream(&stdout(&v)).unwrap();
        assert_eq!(verdicts.len(), count);
        assert!(verdicts.iter().all(|r| r.valid));
    }
}

#[test]
fn enumerate_counts_all_forms() {
    let o = heisen(&["enumerate", "Z/4 x Z/2"]);
    let forms: Vec<FormFile> = from_json_stream(&stdout(&o)).unwrap();
    // q₀₁ ranges over the multiples of 4/(4,2) = 2 mod 4
    assert_eq!(forms.len(), 2);
    assert!(forms.iter().all(|f| f.to_form().is_ok()));
}

#[test]
fn verify_rejects_a_wrong_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_temp(&dir, "f.json", r#"{"group": "Z/3 x Z/3", "q": [[0, 1], [2, 0]]}"#);
    // swapping the generators reverses the sign of the form
    let wrong = write_temp(&dir, "d.json", r#"{"base": "Z/3", "phi": [[0, 1], [1, 0]], "trace": []}"#);
    let o = heisen(&["verify", &form, &wrong]);
    assert_eq!(o.status.code(), Some(1));
    let v: VerificationFile = from_json(&stdout(&o)).unwrap();
    assert!(!v.valid && v.counterexample.is_some());

    let other = write_temp(&dir, "o.json", r#"{"base": "Z/2", "phi": [[1, 0], [0, 1]], "trace": []}"#);
    assert_eq!(heisen(&["verify", &form, &other]).status.code(), Some(2));
}

#[test]
fn construct_summarizes() {
    let dir = tempfile::tempdir().unwrap();
    let form = write_temp(&dir, "f.json", r#"{"group": "Z/3 x Z/3", "q": [[0, 1], [2, 0]]}"#);
    let o = heisen(&["construct", &form]);
    assert_eq!(o.status.code(), Some(0));
    let s: Summary = from_json(&stdout(&o)).unwrap();
    assert_eq!((s.order, s.center_order, s.exponent), (27, 3, 3));
    assert_eq!(s.element_orders.values().sum::<u64>(), 27);
}

#[test]
fn classify_counts() {
    for (n, count) in [(1, 1), (4, 2), (8, 3), (12, 2), (16, 5)] {
        let o = heisen(&["classify", "--order", &n.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let c: ClassificationFile = from_json(&stdout(&o)).unwrap();
        assert_eq!(c.count, count, "n={n}");
        assert_eq!(c.to_record().unwrap().phase_groups.len(), count);
    }
    let o = heisen(&["classify", "--order", "8", "--orbits"]);
    assert_eq!(o.status.code(), Some(0));
    let c: ClassificationFile = from_json(&stdout(&o)).unwrap();
    assert_eq!(c.phase_groups, vec!["Z/8 x Z/8", "Z/4 x Z/4 x Z/2 x Z/2", "Z/2 x Z/2 x Z/2 x Z/2 x Z/2 x Z/2"]);
}

#[test]
fn weyl_report() {
    let o = heisen(&["weyl", "Z/3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let r: WeylReportFile = from_json(&text).unwrap();
    assert_eq!(r.commutant_dimension, 1);
    assert!(r.max_deviation <= 1e-12 && r.unitarity_ok && r.failures.is_empty());
    // the report re-serializes to the same text
    assert_eq!(to_json(&r), text.trim());
    assert_eq!(heisen(&["weyl", "Z/8 x Z/8 x Z/2"]).status.code(), Some(2));
}

#[test]
fn bound_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_heisen"))
        .args(["enumerate", "Z/2 x Z/2 x Z/2 x Z/2"])
        .env("HEISEN_MAX_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bound 10"));
}
