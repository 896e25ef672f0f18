//! End-to-end tests of the binary: exit codes, report fields, batch
//! determinism, and the file formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maxmetric"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_file(name: &str) -> String {
    corpus().join(name).display().to_string()
}

#[test]
fn validate_accepts_heisenberg() {
    let out = run(&["validate", &corpus_file("heisenberg3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["result"]["ok"], serde_json::json!(true));
}

#[test]
fn validate_rejects_antisymmetry_violation_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{
            "dim": 3,
            "basis": ["x", "y", "z"],
            "brackets": [
                {"i": 1, "j": 2, "terms": [{"k": 3, "num": 1, "den": 1}]},
                {"i": 2, "j": 1, "terms": [{"k": 3, "num": 1, "den": 1}]}
            ]
        }"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    let violations = json["result"]["violations"].as_array().unwrap();
    assert!(violations[0]
        .as_str()
        .unwrap()
        .contains("antisymmetry violated at (1, 2, 3)"));
}

#[test]
fn validate_rejects_jacobi_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jacobi.json");
    std::fs::write(
        &path,
        r#"{
            "dim": 3,
            "basis": ["a", "b", "c"],
            "brackets": [
                {"i": 1, "j": 2, "terms": [{"k": 3, "num": 1, "den": 1}]},
                {"i": 1, "j": 3, "terms": [{"k": 2, "num": 1, "den": 1}]},
                {"i": 2, "j": 3, "terms": [{"k": 2, "num": 1, "den": 1}]}
            ]
        }"#,
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    assert!(json["result"]["violations"][0]
        .as_str()
        .unwrap()
        .contains("Jacobi violated at (1, 2, 3)"));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["certify", "/nonexistent/input.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_family_is_maximal_with_exit_0() {
    let out = run(&["certify", "--family", "almost-abelian", "--w", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["result"]["status"], serde_json::json!("MAXIMAL"));
    assert_eq!(json["result"]["dim_invariant_normal"], serde_json::json!(0));
}

#[test]
fn certify_path_graph_is_inconclusive_with_exit_3() {
    let out = run(&["certify", "--graph", &corpus_file("p4.txt")]);
    assert_eq!(out.status.code(), Some(3));
    let json = stdout_json(&out);
    assert_eq!(json["result"]["status"], serde_json::json!("INCONCLUSIVE"));
    assert!(json["result"]["witness"].is_array());
}

#[test]
fn certify_k4_with_lifts_is_maximal() {
    let out = run(&["certify", "--graph", &corpus_file("k4.txt")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn family_and_json_file_share_the_structure_hash() {
    let family = stdout_json(&run(&["certify", "--family", "heisenberg-sum", "--n", "3"]));
    let file = stdout_json(&run(&["certify", &corpus_file("heisenberg3.json")]));
    assert_eq!(family["algebra_hash"], file["algebra_hash"]);
}

#[test]
fn ricci_report_is_exact() {
    let out = run(&["ricci", "--family", "almost-abelian", "--w", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["result"]["scal"], serde_json::json!("-14"));
    assert_eq!(json["result"]["ric_operator"][0][0], serde_json::json!("-5"));
    assert_eq!(json["result"]["einstein"], serde_json::json!(false));
}

#[test]
fn soliton_report_pins_the_canonical_solution() {
    let out = run(&["soliton", "--family", "almost-abelian", "--w", "1,2"]);
    let json = stdout_json(&out);
    assert_eq!(json["result"]["c"], serde_json::json!("-5"));
    assert_eq!(json["result"]["residual_zero"], serde_json::json!(true));
}

#[test]
fn transitivity_of_motion_group() {
    let out = run(&["transitivity", "--family", "motion-group-r2"]);
    let json = stdout_json(&out);
    assert_eq!(json["result"]["transitive"], serde_json::json!(false));
    assert_eq!(json["result"]["codimension"], serde_json::json!(2));
}

#[test]
fn flow_writes_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("traj.csv");
    let out = run(&[
        "flow",
        "--family",
        "heisenberg-sum",
        "--n",
        "3",
        "--a",
        "2",
        "--b",
        "0",
        "--t-end",
        "0.1",
        "--step",
        "0.01",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["result"]["status"], serde_json::json!("completed"));
    assert_eq!(json["result"]["within_tolerance"], serde_json::json!(true));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,g_0_0,g_0_1,g_0_2,g_1_0,g_1_1,g_1_2,g_2_0,g_2_1,g_2_2,eig_1,eig_2,eig_3,scal"
    );
    assert_eq!(csv.lines().count(), 12); // header + 11 samples
}

#[test]
fn graph_auts_counts_and_limit_exit_4() {
    let out = run(&["graph", "auts", &corpus_file("k4.txt")]);
    let json = stdout_json(&out);
    assert_eq!(json["result"]["count"], serde_json::json!(24));

    let capped = run(&["graph", "auts", &corpus_file("k4.txt"), "--limit-aut", "5"]);
    assert_eq!(capped.status.code(), Some(4));
}

#[test]
fn graph_isomorphic_reports_witness() {
    let out = run(&[
        "graph",
        "isomorphic",
        &corpus_file("c5.txt"),
        &corpus_file("c5.txt"),
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["result"]["isomorphic"], serde_json::json!(true));

    let no = run(&[
        "graph",
        "isomorphic",
        &corpus_file("c5.txt"),
        &corpus_file("p4.txt"),
    ]);
    assert_eq!(
        stdout_json(&no)["result"]["isomorphic"],
        serde_json::json!(false)
    );
}

#[test]
fn directions_sweep_is_consistent() {
    let out = run(&["directions", &corpus_file("star3.txt"), "--certify"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["result"]["directions_checked"], serde_json::json!(8));
    assert_eq!(json["result"]["consistent"], serde_json::json!(true));
}

#[test]
fn batch_summary_is_byte_identical_across_runs() {
    let corpus = corpus();
    let first = run(&["batch", corpus.to_str().unwrap(), "--jobs", "2"]);
    let second = run(&["batch", corpus.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.starts_with("name,dim,status,dim_normal,edge_transitive,soliton\n"));
    assert!(text.contains("p4.txt,7,INCONCLUSIVE"));
    assert!(text.contains("petersen.txt,25,MAXIMAL"));
}

#[test]
fn batch_continues_past_broken_items() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("good.txt"), "2 1\n1 2\n").unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ broken").unwrap();
    let out = run(&["batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bad.json,,ERROR"));
    assert!(text.contains("good.txt,3,MAXIMAL"));
}

#[test]
fn batch_empty_directory_gives_empty_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "name,dim,status,dim_normal,edge_transitive,soliton\n");
}

#[test]
fn batch_report_dir_writes_per_item_reports() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("k2.txt"), "2 1\n1 2\n").unwrap();
    let reports = dir.path().join("reports");
    let out = run(&[
        "batch",
        dir.path().to_str().unwrap(),
        "--report-dir",
        reports.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = std::fs::read_to_string(reports.join("k2_txt.report.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(json["result"]["status"], serde_json::json!("MAXIMAL"));
    assert!(json.get("wall_ms").is_none());
}

#[test]
fn user_generator_files_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("gens.json");
    // a genuine orthogonal automorphism of the Heisenberg algebra
    std::fs::write(
        &gens,
        r#"{ "generators": [ [["0","-1","0"],["1","0","0"],["0","0","1"]] ] }"#,
    )
    .unwrap();
    let out = run(&[
        "certify",
        &corpus_file("heisenberg3.json"),
        "--generators",
        gens.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    // a non-automorphism is rejected with a validation failure
    std::fs::write(
        &gens,
        r#"{ "generators": [ [["0","1","0"],["1","0","0"],["0","0","1"]] ] }"#,
    )
    .unwrap();
    let out = run(&[
        "certify",
        &corpus_file("heisenberg3.json"),
        "--generators",
        gens.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn no_input_is_a_usage_error() {
    let out = run(&["certify"]);
    assert_eq!(out.status.code(), Some(2));
}
