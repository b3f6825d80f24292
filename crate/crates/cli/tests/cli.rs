use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cohft"));
    c.env_remove("COHFT_CACHE_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn documented_examples() {
    let v = stdout_json(&run(&["graphs", "--genus", "1", "--legs", "1"]));
    assert_eq!(v["count"], 2);
    assert_eq!(v["graphs"].as_array().unwrap().len(), 2);
    let v = stdout_json(&run(&["rspin", "--r", "3", "--genus", "0", "--a", "1,1,1,1"]));
    assert_eq!(v["value"], "1/3");
    assert_eq!(v["degree"], 1);
    let v = stdout_json(&run(&["psi", "--genus", "1", "--exponents", "1"]));
    assert_eq!(v["value"], "1/24");
}

#[test]
fn goldens_match() {
    let cases: &[(&str, &[&str])] = &[
        ("graphs_g1_n1.json", &["graphs", "--genus", "1", "--legs", "1"]),
        ("graphs_g0_n4.csv", &["graphs", "--genus", "0", "--legs", "4", "--format", "csv"]),
        ("psi_g1_1.json", &["psi", "--genus", "1", "--exponents", "1"]),
        ("psi_g2_2_3.json", &["psi", "--genus", "2", "--exponents", "2,3"]),
        ("rspin_r3_g0_1111.json", &["rspin", "--r", "3", "--genus", "0", "--a", "1,1,1,1"]),
        ("rspin_r5_g1.json", &["rspin", "--r", "5", "--genus", "1", "--a", "0", "--psi", "1"]),
        ("verlinde_l1_g1_w0.json", &["verlinde", "--level", "1", "--genus", "1", "--weights", "0", "--t-order", "1"]),
        ("verlinde_l2_g0_1122.json", &["verlinde", "--level", "2", "--genus", "0", "--weights", "1,1,2,2"]),
        ("hilb_2_2.json", &["hilb", "--m", "2", "--mu1", "2", "--mu2", "2"]),
        (
            "hilb_21_111_q4.csv",
            &["hilb", "--m", "3", "--mu1", "2,1", "--mu2", "1,1,1", "--series-order", "4", "--format", "csv"],
        ),
    ];
    for (file, args) in cases {
        let path = golden(file);
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap();
        full.extend(["--golden", p]);
        let out = run(&full);
        assert!(out.status.success(), "{file}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(out.stdout, std::fs::read(&path).unwrap(), "{file}");
    }
}

#[test]
fn golden_mismatch_and_update() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, "{}\n").unwrap();
    let p = path.to_str().unwrap();
    let out = run(&["psi", "--genus", "1", "--exponents", "1", "--golden", p]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "golden-mismatch");
    assert!(run(&["psi", "--genus", "1", "--exponents", "1", "--golden", p, "--update-golden"]).status.success());
    assert!(run(&["psi", "--genus", "1", "--exponents", "1", "--golden", p]).status.success());
    // --update-golden needs a target
    assert_eq!(run(&["psi", "--genus", "1", "--exponents", "1", "--update-golden"]).status.code(), Some(2));
}

#[test]
fn validation_errors_are_json_on_stderr() {
    for args in [
        vec!["psi", "--genus", "0", "--exponents", "0,0"],
        vec!["rspin", "--r", "3", "--genus", "0", "--a", "2,0,0"],
        vec!["graphs", "--genus", "1", "--legs", "1", "--bogus"],
        vec!["hilb", "--m", "3", "--mu1", "2", "--mu2", "2"],
        vec!["verlinde", "--level", "1", "--genus", "0", "--weights", "0,0,0", "--psi", "1"],
        vec!["psi", "--genus", "1", "--exponents", "x"],
        vec!["suite", "--max-genus", "9"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap_or_else(|_| panic!("{args:?}: stderr not JSON"));
        assert!(err["error"].is_string() && err["message"].is_string(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_across_jobs() {
    let one = run(&["graphs", "--genus", "2", "--legs", "1", "--jobs", "1"]);
    let four = run(&["graphs", "--genus", "2", "--legs", "1", "--jobs", "4"]);
    let again = run(&["graphs", "--genus", "2", "--legs", "1", "--jobs", "4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
    let a = run(&["rspin", "--r", "4", "--genus", "1", "--a", "1,1", "--psi", "1,0", "--jobs", "1"]);
    let b = run(&["rspin", "--r", "4", "--genus", "1", "--a", "1,1", "--psi", "1,0", "--jobs", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

#[test]
fn reconstruct_round_trips_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let frob = write(dir.path(), "f.json", &json!({"dim": 1, "eta": [[1]], "threePoint": {"0,0,0": 1}, "unit": 0}));
    let rmat = write(dir.path(), "r.json", &json!({"order": 2, "R": [[["-1/12"]], [["1/288"]]]}));
    let req = write(
        dir.path(),
        "q.json",
        &json!({"genus": 1, "insertions": [{"vector": ["1"], "psi": 1}, {"vector": [1], "psi": 0}]}),
    );
    let graphs = dir.path().join("graphs.json");
    let out = run(&["graphs", "--genus", "1", "--legs", "2", "--output", graphs.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let base = ["reconstruct", "--frobenius", frob.to_str().unwrap(), "--rmatrix", rmat.to_str().unwrap(), "--request", req.to_str().unwrap()];
    let direct = stdout_json(&run(&base));
    let mut with_file = base.to_vec();
    with_file.extend(["--graph-file", graphs.to_str().unwrap()]);
    let via_file = stdout_json(&run(&with_file));
    assert_eq!(direct["value"], via_file["value"]);
    assert_eq!(direct["graphs"], 5);
    // c(E) on M̄_{1,2} against ψ_1: ∫ψ_1 ψ_1... only λ_1 ψ_1 survives, = 1/24
    assert_eq!(direct["value"], "1/24");
    // graphs of the wrong type are rejected
    let wrong = dir.path().join("wrong.json");
    assert!(run(&["graphs", "--genus", "0", "--legs", "4", "--output", wrong.to_str().unwrap()]).status.success());
    let mut bad = base.to_vec();
    bad.extend(["--graph-file", wrong.to_str().unwrap()]);
    assert_eq!(run(&bad).status.code(), Some(2));
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let first = bin().env("COHFT_CACHE_DIR", dir.path()).args(["psi", "--genus", "2", "--exponents", "4"]).output().unwrap();
    assert!(first.status.success());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let name = entries[0].as_ref().unwrap().file_name().into_string().unwrap();
    assert_eq!(name.len(), 64);
    let second = bin().env("COHFT_CACHE_DIR", dir.path()).args(["psi", "--genus", "2", "--exponents", "4"]).output().unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout_json(&second)["value"], "1/1152");
}

#[test]
fn csv_output() {
    let out = run(&["verlinde", "--level", "1", "--genus", "1", "--weights", "0", "--t-order", "1", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "power,coefficient\n0,0\n1,-1/12\n");
    let out = run(&["psi", "--genus", "0", "--exponents", "1,1,0,0,0", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "value\n2\n");
}

#[test]
fn polynomiality_scan_flag() {
    let v = stdout_json(&run(&["rspin", "--genus", "1", "--a", "0", "--psi", "1", "--scan-r", "2..5"]));
    let values: Vec<&str> = v["scan"].as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap()).collect();
    assert_eq!(values, vec!["1/24", "1/12", "1/8", "1/6"]);
}

#[test]
fn suite_passes_on_small_bounds() {
    let out = run(&["suite", "--max-genus", "1", "--max-legs", "3"]);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["theories"].as_array().unwrap().len(), 8);
    assert!(!out.stderr.is_empty(), "progress goes to stderr");
}

#[test]
fn suite_examples_at_default_bounds() {
    for args in [vec!["suite", "--theory", "rspin", "--r", "5"], vec!["suite", "--theory", "verlinde", "--level", "2"]] {
        let v = stdout_json(&run(&args));
        assert_eq!(v["passed"], true, "{args:?}");
        assert_eq!(v["max_genus"], 2);
        assert_eq!(v["max_legs"], 4);
    }
}
