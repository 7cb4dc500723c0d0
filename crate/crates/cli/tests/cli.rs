use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biregular"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn write_generated(dir: &Path, name: &str, args: &[&str]) {
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    let out = bin(&full);
    assert!(out.status.success());
    fs::write(dir.join(name), out.stdout).unwrap();
}

#[test]
fn analyze_cycle_json() {
    let out = bin(&["analyze", "--gen", "cycle", "6", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["case"], "i");
    assert_eq!(v["distance_biregular"], true);
    assert_eq!(v["oracle"]["distance_biregular"], true);
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn analyze_petersen_is_input_error() {
    let out = bin(&["analyze", "--gen", "petersen"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("NotBipartite"), "{err}");
    assert!(err.contains("odd cycle"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn analyze_subdivided_petersen() {
    let out = bin(&["analyze", "--gen", "petersen", "--subdivide", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["case"], "iv");
    assert_eq!(v["graph"]["n1"], 15);
    assert_eq!(v["graph"]["d1"], 6);
    assert_eq!(v["graph"]["d2"], 5);
    assert_eq!(v["verdict"]["case_c"]["derived"]["pass"], true);
    assert_eq!(v["verdict"]["case_c"]["literal"]["pass"], false);
    assert_eq!(v["case_c_variant"], "both");
}

#[test]
fn literal_variant_changes_exit_code() {
    let out = bin(&["analyze", "--gen", "path", "3", "--case-c-variant", "paper"]);
    assert_eq!(out.status.code(), Some(1));
    let out = bin(&[
        "analyze",
        "--gen",
        "path",
        "3",
        "--case-c-variant",
        "derived",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn analyze_not_biregular_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p4.txt");
    fs::write(&path, "0 1\n1 2\n2 3\n3 4\n").unwrap();
    let out = bin(&["analyze", path.to_str().unwrap()]);
    // P5 is not distance-biregular: the middle vertex and the ends differ
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not distance-biregular"));
}

#[test]
fn analyze_reads_graph6_and_writes_out() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("k23.g6");
    fs::write(&input, "D]o\n").unwrap();
    let report = dir.path().join("report.json");
    let out = bin(&[
        "analyze",
        input.to_str().unwrap(),
        "--json",
        "--timing",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["verdict"]["case"], "iii");
    assert!(v["timing_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn analyze_parse_and_connectivity_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.g6");
    fs::write(&bad, "D]\n").unwrap();
    let out = bin(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("ParseError"));

    let split = dir.path().join("split.txt");
    fs::write(&split, "0 1\n2 3\n").unwrap();
    let out = bin(&["analyze", split.to_str().unwrap(), "--format", "edgelist"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("Disconnected"));

    let out = bin(&["analyze", "--gen", "nonesuch", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["analyze", "--gen", "cycle", "6", "--solver", "nonesuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let args = ["analyze", "--gen", "hypercube", "3", "--json", "--local"];
    let a = stdout(&bin(&args));
    let b = stdout(&bin(&args));
    assert_eq!(a, b);
    assert!(a.contains("local_excess"));
}

#[test]
fn solvers_agree_in_reports() {
    let run = |solver: &str| {
        json(&bin(&[
            "analyze",
            "--gen",
            "petersen",
            "--subdivide",
            "--json",
            "--solver",
            solver,
        ]))
    };
    let (j, h) = (run("jacobi"), run("householder"));
    assert_eq!(j["verdict"]["case"], h["verdict"]["case"]);
    assert_eq!(
        j["spectrum"]["multiplicities"],
        h["spectrum"]["multiplicities"]
    );
    let gap = |v: &Value| v["verdict"]["condition_gap"].as_f64().unwrap();
    assert!(gap(&j) < 1e-9 && gap(&h) < 1e-9);
}

#[test]
fn generate_outputs() {
    let out = bin(&["generate", "cycle", "6"]);
    assert_eq!(stdout(&out), "EhEG\n");
    let out = bin(&[
        "generate",
        "complete_bipartite",
        "2",
        "3",
        "--format",
        "edgelist",
    ]);
    assert_eq!(stdout(&out).lines().count(), 6);
    let out = bin(&["generate", "petersen", "--subdivide"]);
    let line = stdout(&out);
    assert_eq!(
        line.trim_end(),
        "X???????E?P?`?W?GO@_?GO?W??`??O_?D??@G??D???Q???S??"
    );
    // decode through the analyzer: 15 vertices of degree 2, 10 of degree 3
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sp.g6");
    fs::write(&path, line).unwrap();
    let v = json(&bin(&["analyze", path.to_str().unwrap(), "--json"]));
    assert_eq!(v["graph"]["n"], 25);
    assert_eq!(
        (v["graph"]["delta1"].as_u64(), v["graph"]["n1"].as_u64()),
        (Some(2), Some(15))
    );
    assert_eq!(
        (v["graph"]["delta2"].as_u64(), v["graph"]["n2"].as_u64()),
        (Some(3), Some(10))
    );

    assert_eq!(bin(&["generate", "cycle"]).status.code(), Some(2));
    assert_eq!(bin(&["generate", "nonesuch"]).status.code(), Some(2));
}

#[test]
fn generate_chained_subdivision() {
    let out = bin(&[
        "generate",
        "cycle",
        "3",
        "--subdivide",
        "--subdivide",
        "--format",
        "edgelist",
    ]);
    assert_eq!(stdout(&out).lines().count(), 12);
}

#[test]
fn corpus_agrees() {
    let dir = tempfile::tempdir().unwrap();
    for n in (4..=12).step_by(2) {
        write_generated(
            dir.path(),
            &format!("c{n:02}.g6"),
            &["cycle", &n.to_string()],
        );
    }
    for m in 1..=5 {
        for n in m..=5 {
            write_generated(
                dir.path(),
                &format!("k{m}{n}.g6"),
                &["complete_bipartite", &m.to_string(), &n.to_string()],
            );
        }
    }
    for k in 2..=4 {
        write_generated(
            dir.path(),
            &format!("q{k}.g6"),
            &["hypercube", &k.to_string()],
        );
    }
    write_generated(dir.path(), "spet.g6", &["petersen", "--subdivide"]);
    let out = bin(&[
        "corpus",
        dir.path().to_str().unwrap(),
        "--json",
        "--jobs",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v = json(&out);
    let summary = &v["summary"];
    assert_eq!(summary["files"], 24);
    assert_eq!(summary["agreements"], 24);
    assert_eq!(summary["disagreements"].as_array().unwrap().len(), 0);
    // input order is preserved
    let files: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["file"].as_str().unwrap())
        .collect();
    let mut sorted = files.clone();
    sorted.sort();
    assert_eq!(files, sorted);
}

#[test]
fn corpus_empty_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("files 0"));

    write_generated(dir.path(), "c5.g6", &["cycle", "5"]);
    write_generated(dir.path(), "c6.g6", &["cycle", "6"]);
    let out = bin(&["corpus", dir.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    let errors = v["summary"]["errors"].as_array().unwrap();
    assert_eq!(errors.len(), 1);
    assert_eq!(errors[0]["kind"], "NotBipartite");
    assert_eq!(errors[0]["file"], "c5.g6");
    assert_eq!(v["summary"]["agreements"], 1);
}
