use std::path::PathBuf;

use hypercount::cli::run;
use hypercount::counting::classify_regime;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn hc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("hypercount").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut v = args.to_vec();
    v.push("--json");
    let (code, out, err) = hc(&v);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn triangle_has_four_independent_sets() {
    let (code, out, _) = hc(&["exact", "--input", &data("triangle.hg"), "--lambda", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "Z = 4\n");
}

#[test]
fn threshold_of_degree_three_five_uniform() {
    assert_eq!(hc(&["threshold", "--d", "2", "--k", "4"]).1, "lambda_c = 1\n");
}

#[test]
fn regimes_match_classifier() {
    let v = json(&["regimes", "--lambda", "0.7", "--dmax", "6", "--kmax", "5"]);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 30);
    for c in cells {
        let (d, k) = (c["d"].as_u64().unwrap() as usize, c["k"].as_u64().unwrap() as usize);
        assert_eq!(c["regime"].as_str().unwrap(), classify_regime(d, k, 0.7).label());
    }
}

#[test]
fn count_agrees_with_exact() {
    let fano = data("fano.hg");
    let z = json(&["exact", "--input", &fano, "--lambda", "0.5"])["partition_f64"].as_f64().unwrap();
    for eps in ["0.1", "0.01"] {
        let r = json(&["count", "--input", &fano, "--lambda", "0.5", "--eps", eps]);
        let eps: f64 = eps.parse().unwrap();
        assert!((r["estimate"].as_f64().unwrap() / z - 1.0).abs() <= eps);
        assert_eq!(r["regime"], "FPTAS");
        assert_eq!(r["d"], 2);
        assert_eq!(r["k"], 2);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let fano = data("fano.hg");
    let runs: [&[&str]; 3] = [
        &["count", "--input", &fano, "--lambda", "0.5", "--eps", "0.01", "--seed", "9", "--json"],
        &["branching-gen", "--d", "2", "--k", "2", "--n", "300", "--seed", "4"],
        &["saw", "--input", &fano, "--vertex", "3", "--depth", "3", "--seed", "1"],
    ];
    for args in runs {
        let a = hc(args);
        assert_eq!(a.0, 0, "{}", a.2);
        assert_eq!(a, hc(args));
    }
    let one = hc(&["--threads", "1", "count", "--input", &fano, "--lambda", "0.5", "--eps", "0.01"]);
    let two = hc(&["--threads", "2", "count", "--input", &fano, "--lambda", "0.5", "--eps", "0.01"]);
    assert_eq!(one, two);
}

#[test]
fn gadget_output_reproduces_scaled_partition() {
    let dir = std::env::temp_dir().join(format!("hypercount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gadget.hg");
    let (code, out, _) = hc(&["gadget", "--input", &data("triangle.hg"), "--k", "4"]);
    assert_eq!(code, 0);
    std::fs::write(&path, out).unwrap();
    let zh = json(&["exact", "--input", path.to_str().unwrap(), "--lambda", "1/3"]);
    let zg = json(&["exact", "--input", &data("triangle.hg"), "--lambda", "2/3"]);
    assert_eq!(zh["partition"], zg["partition"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn generated_graph_verifies() {
    let dir = std::env::temp_dir().join(format!("hypercount-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h.thg");
    let (code, out, _) = hc(&["branching-gen", "--matrices", &data("star.br"), "--n", "1200", "--seed", "2"]);
    assert_eq!(code, 0);
    std::fs::write(&path, out).unwrap();
    let v = json(&["branching-verify", "--input", path.to_str().unwrap(), "--matrices", &data("star.br"), "--radius", "1"]);
    assert_eq!(v["incidence_counts_exact"], true);
    assert_eq!(v["tree_fraction"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hat_matrices_are_reported_non_reversible() {
    let v = json(&["branching-check", "--matrices", &data("hat_2_4.br")]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["reversible"], false);
    let (code, _, err) = hc(&["branching-gen", "--matrices", &data("hat_2_4.br"), "--n", "100"]);
    assert_eq!(code, 2);
    assert!(err.contains("revers"), "{err}");
}

#[test]
fn bad_inputs_exit_with_two() {
    assert_eq!(hc(&["exact", "--input", &data("triangle.hg"), "--lambda", "-1"]).0, 2);
    assert_eq!(hc(&["count", "--input", &data("triangle.hg"), "--lambda", "1", "--eps", "2"]).0, 2);
    assert_eq!(hc(&["marginal", "--input", &data("triangle.hg"), "--lambda", "1", "--vertex", "7"]).0, 2);
    assert_eq!(hc(&["branching-check", "--d", "2"]).0, 2);
}

#[test]
fn unmet_guarantee_exits_with_three() {
    // Far above the threshold the adaptive loop cannot certify ε at depth 2.
    let (code, _, err) = hc(&["count", "--input", &data("fano.hg"), "--lambda", "50", "--eps", "0.001", "--depth", "2"]);
    assert_eq!(code, 3, "{err}");
}
