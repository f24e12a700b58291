use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn biserial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biserial"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn verdicts(o: &Output) -> Value {
    let v: Value = serde_json::from_str(stdout(o).trim()).unwrap();
    v["verdicts"].clone()
}

#[test]
fn check_a3_and_crossed_pairs() {
    let a3 = fixture("a3.alg");
    let o = biserial(&["check", "--no-timings", a3.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = verdicts(&o);
    for key in ["fuller", "subalgebra_full", "subalgebra_d4", "decide", "nakayama"] {
        assert_eq!(v[key], Value::Bool(true), "{}", key);
    }

    let e = fixture("crossed-pairs.alg");
    let o = biserial(&["check", "--no-timings", e.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = verdicts(&o);
    for key in ["fuller", "subalgebra_full", "subalgebra_d4", "decide"] {
        assert_eq!(v[key], Value::Bool(false), "{}", key);
    }
}

#[test]
fn reports_are_deterministic_without_timings() {
    let f = fixture("five-vertex.alg");
    let a = biserial(&["check", "--no-timings", f.to_str().unwrap()]);
    let b = biserial(&["check", "--no-timings", f.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let with = biserial(&["check", f.to_str().unwrap()]);
    assert!(stdout(&with).contains("timings_ms"));
    assert!(!stdout(&a).contains("timings_ms"));
}

#[test]
fn parse_errors_exit_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    std::fs::write(&bad, "field = 3\nvertex 1\narrow a 1 -> 1\n").unwrap();
    let o = biserial(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3, column 9"), "{}", err);
}

#[test]
fn strict_budget_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("tight.alg");
    let text = std::fs::read_to_string(fixture("a3.alg")).unwrap() + "option fuller_bound = 1\n";
    std::fs::write(&f, text).unwrap();
    let lax = biserial(&["check", "--no-timings", f.to_str().unwrap()]);
    assert_eq!(lax.status.code(), Some(0));
    assert_eq!(verdicts(&lax)["fuller"], Value::Null);
    let strict = biserial(&["check", "--strict", f.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(3));
}

#[test]
fn witness_emit_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("crossed-pairs.alg");
    let out = dir.path().join("w.json");
    let o = biserial(&["witness", f.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = biserial(&["witness", f.to_str().unwrap(), "--replay", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let mut report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    report["verdicts"]["decide"] = Value::Bool(true);
    let tampered = dir.path().join("t.json");
    std::fs::write(&tampered, report.to_string()).unwrap();
    let o = biserial(&["witness", f.to_str().unwrap(), "--replay", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    // a report for a different instance is refused
    let o = biserial(&["witness", fixture("a3.alg").to_str().unwrap(), "--replay", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_runs_and_is_reproducible() {
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let corpus = dir.path().join("generated");
        let reports = dir.path().join("reports.json");
        let o = biserial(&[
            "corpus",
            corpus.to_str().unwrap(),
            "--seed",
            "42",
            "--count",
            "24",
            "--reports",
            reports.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(summary["instances"], 24);
        assert_eq!(summary["disagreements"].as_array().unwrap().len(), 0);
        assert_eq!(summary["without_witness"], 0);
        outputs.push(std::fs::read_to_string(reports).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn generate_writes_parseable_instances() {
    let dir = tempfile::tempdir().unwrap();
    let o = biserial(&["generate", dir.path().to_str().unwrap(), "--count", "4", "--kind", "corollary"]);
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 4);
    for f in files {
        let p = f.unwrap().path();
        let o = biserial(&["check", "--no-timings", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(verdicts(&o)["fuller"], Value::Bool(true));
    }
}

#[test]
fn subalgebra_d4free_and_dot() {
    let d4 = fixture("d4-outward.alg");
    let o = biserial(&["subalgebra", d4.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("vertex 0: N = {1,2,3}"), "{}", text);
    assert!(text.contains("D4: not biserial"));

    let o = biserial(&["d4free", d4.to_str().unwrap()]);
    assert!(stdout(&o).contains("certified obstruction of kind 1"));
    let o = biserial(&["d4free", fixture("crossed-pairs.alg").to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("certified obstruction of kind"), "{}", text);
    assert_eq!(text.matches("no solution").count(), 12);

    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("q.dot");
    let o = biserial(&["export-dot", d4.to_str().unwrap(), "-o", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"0\" -> \"3\" [label=\"c\"]"));
}
