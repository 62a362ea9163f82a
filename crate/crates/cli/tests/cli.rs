use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn graph_file(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, text).unwrap();
    path
}

fn k4() -> PathBuf {
    graph_file("k4.txt", "# complete graph\n4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowpoly"))
        .args(args)
        .env_remove("FLOWPOLY_NODE_CAP")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", stderr(&out));
    stdout(&out)
}

#[test]
fn counts_and_volumes() {
    let g = k4();
    let g = g.to_str().unwrap();
    assert_eq!(ok(&["kostant", "--graph", g, "--netflow", "1,0,0"]).trim(), "4");
    assert_eq!(ok(&["kostant", "--graph", g, "--netflow", "1,0,0,-1", "--emit", "json"]).trim(), r#"{"count":"4"}"#);
    assert_eq!(ok(&["ehrhart", "--graph", g, "--netflow", "1,0,0"]).trim(), "1, 11/6, 1, 1/6");
    assert_eq!(ok(&["lidskii", "--graph", g, "--mode", "volume", "--netflow", "1,1,0"]).trim(), "4");
    assert_eq!(ok(&["lidskii", "--graph", g, "--mode", "count", "--netflow", "0,1,2"]).trim(), "2");
    assert_eq!(ok(&["lidskii", "--graph", g, "--mode", "c-form", "--c", "3,2,2"]).trim(), "22");
}

#[test]
fn reduce_and_dissect() {
    let g = k4();
    let g = g.to_str().unwrap();
    let census = ok(&["reduce", "--graph", g]);
    assert!(census.contains("j=(2,1,0)") && census.contains("j=(3,0,0)"), "{census}");
    assert!(census.contains("total leaves: 2"));

    let json: serde_json::Value = serde_json::from_str(&ok(&["reduce", "--graph", g, "--emit", "json"])).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 2);

    let dot = ok(&["reduce", "--graph", g, "--emit", "dot"]);
    assert!(dot.starts_with("digraph reduction {") && dot.contains("->"));

    let summary = ok(&["dissect", "--graph", g, "--c", "3,2,2"]);
    assert!(summary.contains("cells: 22"), "{summary}");

    let report = ok(&["dissect", "--graph", g, "--c", "1,1,1", "--emit", "report", "--debug-pairwise-disjoint"]);
    assert!(!report.contains("FAIL"), "{report}");
    assert!(report.contains("PASS pairwise interiors disjoint"));
}

#[test]
fn node_cap_aborts_cleanly() {
    let g = k4();
    let out = run(&["--node-cap", "2", "reduce", "--graph", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("node cap of 2"));

    let out = Command::new(env!("CARGO_BIN_EXE_flowpoly"))
        .args(["dissect", "--graph", g.to_str().unwrap(), "--c", "3,2,2"])
        .env("FLOWPOLY_NODE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!stderr(&out).contains("panicked"));
}

#[test]
fn bad_input_reports_line() {
    let bad = graph_file("bad.txt", "4\n1 2\n1 5\n");
    let out = run(&["kostant", "--graph", bad.to_str().unwrap(), "--netflow", "1,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let g = k4();
    let out = run(&["kostant", "--graph", g.to_str().unwrap(), "--netflow", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["lidskii", "--graph", g.to_str().unwrap(), "--mode", "c-form", "--c", "1,0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let small = ["--max-vertices", "4", "--max-edges", "4", "--max-netflow", "2"];
    for suite in ["eq2", "eq1", "thm41", "census", "dissection", "in-vector", "fidelity"] {
        let mut args = vec!["verify", "--suite", suite];
        args.extend(small);
        let out = ok(&args);
        assert!(out.starts_with("PASS"), "{suite}: {out}");
    }
    assert!(ok(&["verify", "--suite", "noncrossing", "--max-edges", "4"]).starts_with("PASS"));

    let mut args = vec!["verify", "--suite", "eq2", "--debug-corrupt-formula"];
    args.extend(small);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("FAIL") && stdout(&out).contains("counterexample"));

    let out = run(&["verify", "--suite", "eq2", "--max-edges", "1"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("ran 0 instances"));

    let mut args = vec!["verify", "--suite", "dissection", "--emit", "json"];
    args.extend(small);
    let json: serde_json::Value = serde_json::from_str(ok(&args).trim()).unwrap();
    assert_eq!(json["failures"], 0);
    assert!(json["instances"].as_u64().unwrap() > 0);
}
