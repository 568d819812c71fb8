use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twoloop(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoloop"))
        .current_dir(dir)
        .env_remove("TWOLOOP_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn abelian_grid_gives_one_row_per_energy() {
    let dir = tempfile::tempdir().unwrap();
    let out = twoloop(
        dir.path(),
        &[
            "abelian",
            "--a",
            "1",
            "--t-grid",
            "-1.9:-1e-4:50",
            "--out",
            "t.csv",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 51);
    assert_eq!(lines[0], "t,j_m1,j_0,j_1,err_m1,err_0,err_1,converged");
    assert!(lines[1].starts_with("-1.8999999999999999e0,"));
    let m = json(&dir.path().join("t.manifest.json"));
    assert_eq!(m["status"], "ok");
    assert_eq!(m["config"]["t_grid"], "-1.9:-1e-4:50");
    assert_eq!(m["config"]["subcommand"], "abelian");
}

#[test]
fn field_errors_name_the_field_and_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = twoloop(
        dir.path(),
        &[
            "oval", "--family", "appendix", "--a", "1", "--c", "17", "--t", "-0.5",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a not applicable to family=appendix"));
}

#[test]
fn output_is_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out = twoloop(
            dir.path(),
            &[
                "centroid",
                "--a",
                "0.5",
                "--samples",
                "80",
                "--threads",
                threads,
                "--out",
                name,
            ],
        );
        assert!(out.status.success());
        fs::read(dir.path().join(name)).unwrap()
    };
    let a = run("a.csv", "1");
    assert_eq!(a, run("b.csv", "1"));
    assert_eq!(a, run("c.csv", "4"));
}

#[test]
fn config_overrides_flags_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"subcommand": "abelian", "a": 0.5, "t_grid": "-2:-0.1:4"}"#,
    )
    .unwrap();
    let out = twoloop(
        dir.path(),
        &[
            "abelian", "--a", "1", "--config", "c.json", "--out", "o.csv",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        json(&dir.path().join("o.manifest.json"))["config"]["a"],
        0.5
    );

    fs::write(&cfg, r#"{"a": 0.5, "b": 1}"#).unwrap();
    let out = twoloop(dir.path(), &["abelian", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field `b`"));

    fs::write(&cfg, r#"{"subcommand": "pf"}"#).unwrap();
    let out = twoloop(dir.path(), &["abelian", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn default_output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_twoloop"))
        .current_dir(dir.path())
        .env("TWOLOOP_OUT_DIR", "artifacts")
        .args(["pf", "--a", "1", "--order", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let s = json(&dir.path().join("artifacts/series.json"));
    assert_eq!(s["q"].as_array().unwrap().len(), 5);
    assert!(dir.path().join("artifacts/series.manifest.json").exists());
}

#[test]
fn exact_series_prints_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let out = twoloop(
        dir.path(),
        &[
            "pf", "--a", "1", "--order", "3", "--exact", "--out", "s.json",
        ],
    );
    assert!(out.status.success());
    let s = json(&dir.path().join("s.json"));
    assert_eq!(s["q"][1], serde_json::json!(["0", "1/6", "0"]));
    assert_eq!(s["q"][2], serde_json::json!(["-1/144", "0", "-1/72"]));
    assert_eq!(s["p"][0], serde_json::json!(["0", "3", "0"]));
}

#[test]
fn classification_is_printed() {
    let dir = tempfile::tempdir().unwrap();
    let out = twoloop(
        dir.path(),
        &[
            "melnikov",
            "--a",
            "1",
            "--beta",
            "1",
            "--gamma",
            "0",
            "--classify",
        ],
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("k = 1, M_1(0) != 0"), "{stdout}");
    let out = twoloop(dir.path(), &["melnikov", "--a", "1", "--classify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_census_finds_two_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let out = twoloop(
        dir.path(),
        &[
            "sim",
            "--family",
            "appendix",
            "--c",
            "80",
            "--eps",
            "1e-3",
            "--mu1",
            "0.1",
            "--mu2",
            "0.199093",
            "--census",
            "--out",
            "census.json",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let c = json(&dir.path().join("census.json"));
    let cycles = c["cycles"].as_array().unwrap();
    assert_eq!(cycles.len(), 2);
    assert_eq!(cycles[0]["stability"], "repelling");
    assert_eq!(cycles[1]["stability"], "attracting");
}

#[test]
fn sim_mode_and_family_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = twoloop(dir.path(), &["sim", "--a", "1", "--census", "--traces"]);
    assert_eq!(out.status.code(), Some(2));
    let out = twoloop(dir.path(), &["sim", "--a", "1", "--mu1", "0.1", "--traces"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("mu1 not applicable to family=normal_form")
    );
}

#[test]
fn escaping_trajectory_is_degraded() {
    let dir = tempfile::tempdir().unwrap();
    let out = twoloop(
        dir.path(),
        &[
            "sim",
            "--a",
            "1",
            "--trajectory",
            "--start",
            "3,3",
            "--t-end",
            "50",
            "--out",
            "tr.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        json(&dir.path().join("tr.manifest.json"))["status"],
        "degraded"
    );
}

#[test]
fn trajectory_on_the_ellipse_family_conserves_energy() {
    let dir = tempfile::tempdir().unwrap();
    let out = twoloop(
        dir.path(),
        &[
            "sim",
            "--family",
            "appendix",
            "--c",
            "17",
            "--trajectory",
            "--start",
            "0,1",
            "--t-end",
            "5",
            "--out",
            "tr.csv",
        ],
    );
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("tr.csv")).unwrap();
    for line in text.lines().skip(1) {
        let h: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((h + 11.0 / 12.0).abs() < 1e-10, "{h}");
    }
}
