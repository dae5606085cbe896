use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_activetime"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("activetime-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

const THREE: &str = r#"{"B": 2, "jobs": [
  {"id": "a", "windows": [[0, 2]]},
  {"id": "b", "windows": [[0, 2]]},
  {"id": "c", "windows": [[0, 2]]}]}"#;

const FIGURE: &str = r#"{"B": 2, "jobs": [
  {"id": "A", "slots": [0, 1]},
  {"id": "B", "slots": [0, 1]},
  {"id": "C", "slots": [1]}]}"#;

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn solve_lazy_three_jobs() {
    let inst = scratch("three.json", THREE);
    let out = run(&["solve", "--input", &inst, "--algo", "lazy"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["active_time"], "2");
}

#[test]
fn solve_outputs_pass_verify() {
    let cases = [
        (THREE, vec!["lazy", "lazy-linear", "b2", "b2-lengths", "greedy", "oracle", "dp-batch", "preempt"]),
        (FIGURE, vec!["b2", "b2-lengths", "greedy", "oracle", "preempt"]),
    ];
    for (i, (body, algos)) in cases.iter().enumerate() {
        let inst = scratch(&format!("verify{i}.json"), body);
        for algo in algos {
            let sched = scratch(&format!("verify{i}-{algo}.out.json"), "");
            let out = run(&["solve", "--input", &inst, "--algo", algo, "--output", &sched]);
            assert_eq!(out.status.code(), Some(0), "{algo}: {}", String::from_utf8_lossy(&out.stderr));
            let out = run(&["verify", "--input", &inst, "--schedule", &sched]);
            assert_eq!(out.status.code(), Some(0), "{algo}");
            assert_eq!(json(&out)["valid"], true);
        }
    }
}

#[test]
fn preempt_reports_half_idle() {
    let inst = scratch("figure.json", FIGURE);
    let out = run(&["solve", "--input", &inst, "--algo", "preempt"]);
    let v = json(&out);
    assert_eq!(v["active_time"], "3/2");
    assert_eq!(v["idle"]["0"], "1/2");
    assert_eq!(v["segments"].as_array().unwrap().len(), 5);
}

#[test]
fn tampered_schedule_fails_verify() {
    let inst = scratch("tamper.json", THREE);
    let sched = scratch(
        "tamper.sched.json",
        r#"{"assignments": {"a": [0], "b": [0], "c": [0]}, "active_slots": [0], "active_time": "1"}"#,
    );
    let out = run(&["verify", "--input", &inst, "--schedule", &sched]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert!(v["violations"][0].as_str().unwrap().contains("capacity"));
}

#[test]
fn compare_tight_family() {
    let gap = scratch("gap.json", "");
    assert_eq!(run(&["gen", "--kind", "gap", "--k", "1", "--output", &gap]).status.code(), Some(0));
    let out = run(&["compare", "--input", &gap]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ratio"], "4/3");
    assert_eq!((v["integral_active"].clone(), v["preemptive_active"].clone()), ("2".into(), "3/2".into()));
}

#[test]
fn gen_is_deterministic_and_matches_snapshot() {
    let args = ["gen", "--kind", "random", "--n", "3", "--horizon", "4", "--b", "2", "--seed", "1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap(), golden("random_n3_t4_b2_seed1.json") + "\n");
}

#[test]
fn gen_xc3_from_file() {
    let spec = scratch("xc3.json", r#"{"elements": [1,2,3,4,5,6], "triples": [[1,2,3],[4,5,6]]}"#);
    let inst = scratch("xc3.inst.json", "");
    assert_eq!(run(&["gen", "--kind", "xc3", "--input", &spec, "--output", &inst]).status.code(), Some(0));
    let out = run(&["solve", "--input", &inst, "--algo", "oracle"]);
    assert_eq!(json(&out)["active_time"], "2");
    let bad = scratch("xc3.bad.json", r#"{"elements": [1,2,3], "triples": [[1,1,2]]}"#);
    assert_eq!(run(&["gen", "--kind", "xc3", "--input", &bad]).status.code(), Some(2));
}

#[test]
fn export_lp_matches_golden() {
    let inst = scratch("lp.json", r#"{"B": 2, "jobs": [
      {"id": "j000", "slots": [0, 1]}, {"id": "j001", "slots": [0, 1]}, {"id": "j002", "slots": [0, 1]}]}"#);
    let out = run(&["export-lp", "--input", &inst, "--form", "slot"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("three_jobs.lp"));
}

#[test]
fn bench_writes_fixed_header() {
    let inst = scratch("bench.json", THREE);
    let csv = scratch("bench.csv", "");
    let out = run(&["bench", "--input", &inst, "--algo", "lazy", "--algo", "preempt", "--csv", &csv]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,algo,active_time,jobs,wall_ms");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains(",lazy,2,3,"));
    assert!(lines[2].contains(",preempt,3/2,3,"));
}

#[test]
fn exit_codes() {
    let inst = scratch("codes.json", THREE);
    assert_eq!(run(&["solve", "--input", &inst, "--algo", "lazy", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--input", &inst, "--algo", "dp-throughput"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--input", "/nonexistent.json", "--algo", "lazy"]).status.code(), Some(2));
    let tight = scratch("tight.json", r#"{"B": 1, "jobs": [{"id": "a", "slots": [0]}, {"id": "b", "slots": [0]}]}"#);
    assert_eq!(run(&["solve", "--input", &tight, "--algo", "b2-lengths"]).status.code(), Some(2));
    let over = scratch("over.json", r#"{"B": 2, "jobs": [{"id": "a", "slots": [0]}, {"id": "b", "slots": [0]}, {"id": "c", "slots": [0]}]}"#);
    assert_eq!(run(&["solve", "--input", &over, "--algo", "b2-lengths"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--input", &over, "--algo", "b2"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--input", &over, "--algo", "b2", "--float"]).status.code(), Some(1));
}
