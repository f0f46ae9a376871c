use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bfly(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfly"))
        .current_dir(dir)
        .env_remove("BFLY_OUT_DIR")
        .args(args)
        .output()
        .expect("bfly runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn build_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = bfly(d, &["build", "--family", "univariate", "--m", "3", "--theta", "0x2", "-o", "f.tbl"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(d.join("f.tbl")).unwrap().lines().count(), 65);
    let m = read_json(&d.join("f.tbl.manifest.json"));
    assert_eq!(m["command"], "build");
    assert_eq!(m["params"]["theta"], "0x2");

    let o = bfly(d, &["analyze", "-i", "f.tbl", "--mode", "full", "--out-dir", "out"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = |kind: &str| read_json(&d.join(format!("out/f.{kind}.summary.json")));
    assert_eq!(summary("ddt")["delta_or_beta"], 4);
    assert_eq!(summary("bct")["delta_or_beta"], 4);
    assert_eq!(summary("bct_lqsl")["delta_or_beta"], 4);
    assert_eq!(summary("walsh")["nonlinearity"], 24);
    let csv = fs::read_to_string(d.join("out/f.ddt.csv")).unwrap();
    assert!(csv.lines().skip(2).all(|l| l.ends_with(",4")), "nonzero DDT entries with a != 0 are 4");
}

#[test]
fn outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |sub: &str| {
        let build = bfly(d, &["build", "--family", "univariate", "--m", "3", "--theta", "0x3", "--out-dir", sub]);
        assert_eq!(code(&build), 0);
        let table = format!("{sub}/univariate-m3-k1.tbl");
        let o = bfly(
            d,
            &["analyze", "-i", &table, "--mode", "sampled", "--samples", "500", "--seed", "9", "--out-dir", sub],
        );
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    };
    run("a");
    run("b");
    let mut names: Vec<_> = fs::read_dir(d.join("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 10, "{names:?}");
    for name in names {
        let a = fs::read_to_string(d.join("a").join(&name)).unwrap();
        let b = fs::read_to_string(d.join("b").join(&name)).unwrap();
        assert_eq!(a.replace("a/", "b/"), b, "{name:?}");
    }
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bfly"))
        .current_dir(dir.path())
        .env("BFLY_OUT_DIR", "env-out")
        .args(["build", "--family", "1", "--m", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("env-out/1-m3-k1.tbl").exists());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: &[&[&str]] = &[
        &["build", "--family", "3", "--m", "3"],
        &["build", "--family", "3", "--m", "3", "--gamma", "0x1"],
        &["build", "--family", "2", "--m", "3", "--i", "3"],
        &["build", "--family", "univariate", "--m", "4", "--theta", "0x2"],
        &["build", "--family", "univariate", "--m", "3", "--theta", "0x9"],
        &["diagnose", "--m", "3", "--theta", "0x2", "--a", "0x0", "--b", "0x1"],
        &["--threads", "0", "solve-l", "--m", "3", "--mu", "0x0", "--nu", "0x0"],
        &["analyze", "-i", "missing.tbl"],
    ];
    for args in cases {
        assert_eq!(code(&bfly(d, args)), 2, "{args:?}");
    }
}

#[test]
fn non_permutation_bct_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = bfly(d, &["build", "--family", "butterfly-closed", "--m", "3", "--alpha", "0x2", "--beta", "0x2", "-o", "c.tbl"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["params"]["condition_holds"], false);
    assert_eq!(code(&bfly(d, &["analyze", "-i", "c.tbl", "--spectrum", "bct"])), 2);
    let o = bfly(d, &["analyze", "-i", "c.tbl", "--spectrum", "ddt"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn scale_refusals_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = bfly(d, &["build", "--family", "univariate", "--m", "7", "--theta", "0x2", "-o", "g.tbl"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&bfly(d, &["analyze", "-i", "g.tbl", "--spectrum", "bct", "--mode", "full"])), 3);
    assert_eq!(code(&bfly(d, &["analyze", "-i", "g.tbl", "--spectrum", "bct"])), 3);
    assert_eq!(code(&bfly(d, &["verify", "--suite", "theorem", "--m", "7"])), 3);
    assert_eq!(code(&bfly(d, &["bench", "--n", "14"])), 3);
    let o = bfly(d, &["analyze", "-i", "g.tbl", "--spectrum", "bct", "--mode", "sampled", "--samples", "300"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = read_json(&d.join("g.bct.summary.json"));
    assert!(s["delta_or_beta"].as_i64().unwrap() <= 4);
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["theorem", "necessity", "open-butterfly", "lemmas"] {
        let o = bfly(dir.path(), &["verify", "--suite", suite, "--m", "3"]);
        assert_eq!(code(&o), 0, "{suite}: {}", String::from_utf8_lossy(&o.stdout));
        let v = stdout_json(&o);
        assert!(v.as_array().unwrap().iter().all(|r| r["pass"] == true));
    }
}

#[test]
fn solve_l_trivial_equation() {
    let dir = tempfile::tempdir().unwrap();
    let o = bfly(dir.path(), &["solve-l", "--m", "3", "--mu", "0x0", "--nu", "0x0"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["count"], 2);
    assert_eq!(v["roots"], serde_json::json!(["0x00", "0x01"]));
}

#[test]
fn diagnose_reports_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let o = bfly(dir.path(), &["diagnose", "--m", "3", "--theta", "0x2", "--a", "0x5", "--b", "0x9", "-o", "d.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["kernel_hex"].as_array().unwrap().len(), 4);
    assert_eq!(read_json(&dir.path().join("d.json")), v);
}
