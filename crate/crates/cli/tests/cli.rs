//! End-to-end tests of the binary: exit codes, output determinism, golden
//! export bytes, and the published JSON shapes.

use std::process::{Command, Output};

fn qah(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qah"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn qah_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qah"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn build_matches_golden_bytes() {
    for (n, golden) in [
        ("0", include_bytes!("golden/complex_n0.json").as_slice()),
        ("1", include_bytes!("golden/complex_n1.json").as_slice()),
    ] {
        let dir = std::env::temp_dir().join(format!("qah_build_{n}_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("complex.json");
        let run1 = qah(&["build", "--n", n, "--out", path.to_str().unwrap()]);
        assert!(run1.status.success());
        let bytes1 = std::fs::read(&path).unwrap();
        assert_eq!(
            bytes1, golden,
            "export drifted from the golden file at n={n}"
        );
        // repeated runs produce identical file bytes and manifest
        let run2 = qah(&["build", "--n", n, "--out", path.to_str().unwrap()]);
        assert_eq!(std::fs::read(&path).unwrap(), bytes1);
        assert_eq!(stdout(&run1), stdout(&run2));
        std::fs::remove_dir_all(&dir).ok();
    }
}

#[test]
fn build_manifest_reports_counts() {
    let dir = std::env::temp_dir().join(format!("qah_manifest_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.json");
    let out = qah(&["build", "--n", "1", "--out", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("cells=54"), "{text}");
    assert!(text.contains("sha256 "));
    let out = qah(&["build", "--n", "0", "--out", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("cells=6"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn build_rejects_large_n_and_bad_paths() {
    let out = qah(&["build", "--n", "9", "--out", "/tmp/never.json"]);
    assert_eq!(out.status.code(), Some(2));
    // the cap is an environment override
    let out = qah_env(
        &["build", "--n", "1", "--out", "/tmp/never.json"],
        "QAH_MAX_N",
        "0",
    );
    assert_eq!(out.status.code(), Some(2));
    let out = qah(&["build", "--n", "0", "--out", "/no-such-dir/never.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let a = qah(&["verify", "--n", "2", "--suite", "cube"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("PASS cube.boundary-identity"));
    let b = qah(&["verify", "--n", "2", "--suite", "cube"]);
    assert_eq!(a.stdout, b.stdout, "verify reports must be byte-identical");

    let g1 = qah(&["verify", "--n", "1", "--suite", "geometry"]);
    let g2 = qah(&["verify", "--n", "1", "--suite", "geometry"]);
    assert_eq!(g1.status.code(), Some(0));
    assert_eq!(g1.stdout, g2.stdout);
    assert!(stdout(&g1).contains("seed=17"));
}

#[test]
fn verify_json_shape() {
    let out = qah(&["verify", "--n", "1", "--suite", "signs", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    assert!(v["results"].as_array().unwrap().len() >= 2);
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = qah(&["verify", "--n", "1", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn homology_output() {
    let out = qah(&["homology", "--n", "1", "--degree", "0", "--filter", "eq"]);
    assert!(stdout(&out).contains("free rank 1"));
    let out = qah(&[
        "homology", "--n", "1", "--degree", "2", "--filter", "relative", "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["free_rank"].as_u64().unwrap() >= 3);
    // unknown degree
    let out = qah(&["homology", "--n", "1", "--degree", "7", "--filter", "all"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn intersect_outputs() {
    let out = qah(&["intersect", "--n", "2", "--set", "1"]);
    assert!(stdout(&out).contains("= 1"));
    let out = qah(&["intersect", "--n", "2", "--set", "1,3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["index"], 0);
    assert_eq!(v["certificate"]["kind"], "disjointness");
    assert_eq!(v["certificate"]["verified"], true);
    let out = qah(&["intersect", "--n", "1", "--set", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn monodromy_tables() {
    // D even: the double threshold loop returns to the base class
    let out = qah(&["monodromy", "--D", "4", "--loops", "+,+"]);
    let text = stdout(&out);
    assert!(text.trim_end().ends_with("result: 1·(i·R)^4"), "{text}");

    // D odd: one pl unit per loop
    let out = qah(&["monodromy", "--D", "5", "--loops", "+,+", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["base"], 1);
    let spheres = v["spheres"].as_array().unwrap();
    assert_eq!(spheres.len(), 1);
    assert_eq!(spheres[0]["coefficient"], -2);

    // pseudo-threshold after threshold, both variants agree on coefficients
    for variant in ["a", "b"] {
        let out = qah(&[
            "monodromy",
            "--D",
            "4",
            "--loops",
            "+,-",
            "--variant",
            variant,
            "--json",
        ]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        let spheres = v["spheres"].as_array().unwrap();
        assert_eq!(spheres.len(), 2, "{variant}: {v}");
    }

    let out = qah(&["monodromy", "--D", "4", "--loops", "+,x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrix_text_format() {
    let out = qah(&["matrix", "--n", "1", "--degree", "1", "--filter", "eq"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    let header: Vec<usize> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(header.len(), 3);
    assert_eq!(lines.count(), header[2]);
    // triples are 1-based and ascending
    let mut prev = (0usize, 0usize);
    for line in text.lines().skip(1) {
        let parts: Vec<i64> = line
            .split_whitespace()
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(parts.len(), 3);
        assert!(parts[0] >= 1 && parts[1] >= 1);
        let cur = (parts[0] as usize, parts[1] as usize);
        assert!(cur > prev);
        prev = cur;
    }
}
