use std::collections::BTreeSet;
use std::path::PathBuf;

use serde_json::Value;
use strongdim_cli::{run, AlgebraFile};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn strongdim(args: &[&str]) -> (i32, String, String) {
    run(std::iter::once("strongdim").chain(args.iter().copied()))
}

fn dot_and_json(file: &str, n: usize) -> (String, Value) {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("q.dot");
    let json = dir.path().join("q.json");
    let n = n.to_string();
    let (code, _, err) = strongdim(&[
        "ar-quiver",
        &fixture(file),
        "--n",
        &n,
        "--seedless",
        "--dot",
        dot.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let dot = std::fs::read_to_string(dot).unwrap();
    let json = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    (dot, json)
}

#[test]
fn fixtures_round_trip() {
    for name in [
        "single_vertex.alg",
        "a2.alg",
        "example_4_5.alg",
        "example_4_7.alg",
        "corrupted_differential.alg",
    ] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let parsed = AlgebraFile::parse(&text).unwrap();
        let again = AlgebraFile::parse(&parsed.to_text()).unwrap();
        assert_eq!(parsed, again, "{name}");
    }
}

#[test]
fn sgldim_reports() {
    let (code, out, _) = strongdim(&["sgldim", &fixture("example_4_5.alg")]);
    assert_eq!(code, 0);
    assert!(out.contains("s.gl.dim = 2; m0 = 4"));
    let (code, out, _) = strongdim(&["sgldim", &fixture("single_vertex.alg"), "--fast"]);
    assert_eq!(code, 0);
    assert!(out.contains("s.gl.dim = 0"));
    let (code, out, _) = strongdim(&["sgldim", &fixture("a2.alg")]);
    assert_eq!(code, 0);
    assert!(out.contains("s.gl.dim = 1; m0 = 3"));
}

#[test]
fn sgldim_json_is_versioned() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let (code, _, _) = strongdim(&["sgldim", &fixture("a2.alg"), "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["schemaVersion"], 1);
    assert_eq!(v["command"], "sgldim");
    assert_eq!(v["payload"]["sgldim"], 1);
    assert_eq!(v["payload"]["m0"], 3);
    assert_eq!(v["algebra"]["field"], "rational");
    assert!(v["timingMs"].is_u64());
}

#[test]
fn exit_codes() {
    assert_eq!(strongdim(&["--help"]).0, 0);
    assert_eq!(strongdim(&["sgldim"]).0, 1);
    assert_eq!(strongdim(&["sgldim", "/nonexistent/file.alg"]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    std::fs::write(&bad, "vertices: 1 2\narrow a: 1 -> 3\n").unwrap();
    assert_eq!(strongdim(&["sgldim", bad.to_str().unwrap()]).0, 1);
    std::fs::write(&bad, "vertices 1 2\n").unwrap();
    assert_eq!(strongdim(&["sgldim", bad.to_str().unwrap()]).0, 1);
    let (code, _, err) = strongdim(&["derived-quiver", &fixture("a2.alg"), "--t-min", "1", "--t-max", "0"]);
    assert_eq!(code, 1, "{err}");
    let (code, out, _) = strongdim(&["derived-quiver", &fixture("single_vertex.alg")]);
    assert_eq!(code, 2);
    assert!(out.contains("eta = 0"));
    assert_eq!(strongdim(&["sgldim", &fixture("example_4_7.alg"), "--max-n", "3"]).0, 2);
    let (code, out, _) = strongdim(&["check", &fixture("corrupted_differential.alg")]);
    assert_eq!(code, 3);
    assert!(out.contains("FAIL declared complex"));
}

#[test]
fn single_vertex_dot_shape() {
    let (dot, _) = dot_and_json("single_vertex.alg", 2);
    let nodes = dot.lines().filter(|l| l.contains("[label=\"P") || l.contains("[label=\"0")).count();
    let solid = dot.lines().filter(|l| l.contains(" -> ") && !l.contains("dashed")).count();
    let dashed = dot.lines().filter(|l| l.contains("style=dashed")).count();
    assert_eq!((nodes, solid, dashed), (3, 2, 1));
}

#[test]
fn json_and_dot_describe_the_same_quiver() {
    for (file, n) in [("a2.alg", 3), ("example_4_5.alg", 3)] {
        let (dot, json) = dot_and_json(file, n);
        let p = &json["payload"];
        let dot_nodes: BTreeSet<String> = dot
            .lines()
            .filter(|l| l.contains("shape="))
            .map(|l| l.trim().split(' ').next().unwrap().to_string())
            .collect();
        let json_nodes: BTreeSet<String> = p["vertices"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v["id"].as_str().unwrap().to_string())
            .collect();
        assert_eq!(dot_nodes, json_nodes);
        let edge = |l: &str| {
            let parts: Vec<&str> = l.trim().split(' ').collect();
            (parts[0].to_string(), parts[2].to_string())
        };
        let dot_arrows: BTreeSet<_> = dot
            .lines()
            .filter(|l| l.contains(" -> ") && !l.contains("dashed"))
            .map(edge)
            .collect();
        let json_arrows: BTreeSet<_> = p["arrows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| (a["source"].as_str().unwrap().to_string(), a["target"].as_str().unwrap().to_string()))
            .collect();
        assert_eq!(dot_arrows, json_arrows);
        let dot_tau: BTreeSet<_> = dot.lines().filter(|l| l.contains("dashed")).map(edge).collect();
        let json_tau: BTreeSet<_> = p["tau"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| (t["from"].as_str().unwrap().to_string(), t["to"].as_str().unwrap().to_string()))
            .collect();
        assert_eq!(dot_tau, json_tau);
    }
}

#[test]
fn example_45_window_four_labels_have_an_empty_end() {
    let (_, json) = dot_and_json("example_4_5.alg", 4);
    for v in json["payload"]["vertices"].as_array().unwrap() {
        let label = v["label"].as_str().unwrap();
        let cells: Vec<&str> = label.split("->").collect();
        assert_eq!(cells.len(), 4);
        if v["projInjective"].as_bool().unwrap() {
            continue;
        }
        assert!(cells[0] == "0" || cells[3] == "0", "{label}");
    }
}

#[test]
fn dot_output_matches_golden_files() {
    for (file, n) in [
        ("single_vertex", 2),
        ("a2", 2),
        ("a2", 3),
        ("example_4_5", 3),
        ("example_4_5", 4),
    ] {
        let (dot, _) = dot_and_json(&format!("{file}.alg"), n);
        assert_eq!(dot, golden(&format!("{file}_n{n}.dot")), "{file} n = {n}");
    }
    for file in ["a2", "example_4_5"] {
        let dir = tempfile::tempdir().unwrap();
        let dot = dir.path().join("d.dot");
        let (code, _, err) = strongdim(&[
            "derived-quiver",
            &fixture(&format!("{file}.alg")),
            "--t-min",
            "-1",
            "--t-max",
            "1",
            "--seedless",
            "--dot",
            dot.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(std::fs::read_to_string(dot).unwrap(), golden(&format!("{file}_derived.dot")));
    }
}

#[test]
fn derived_window_has_three_copies() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("d.json");
    let (code, _, _) = strongdim(&["derived-quiver", &fixture("a2.alg"), "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let gb = v["payload"]["gammaBar"].as_array().unwrap().len();
    assert_eq!(v["payload"]["vertices"].as_array().unwrap().len(), 3 * gb);
}

#[test]
fn checks_pass_on_clean_fixtures() {
    let (code, out, err) = strongdim(&["check", &fixture("a2.alg"), "--oracle", "gf2", "--bound", "2"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("PASS oracle (n = 2, bound 2)"));
    let (code, out, err) = strongdim(&["check", &fixture("example_4_5.alg"), "--n", "4"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.ends_with("all checks passed\n"));
}
