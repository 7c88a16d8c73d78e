use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn vsep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vsep"))
        .args(args)
        .current_dir(dir)
        .env_remove("VSEP_C_PTAS")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = vsep(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).collect()
}

fn two_point(dir: &Path) -> &'static str {
    std::fs::write(dir.join("two.pts"), "0 0 1\n1 0 2\n").unwrap();
    "two.pts"
}

#[test]
fn gen_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = ok(dir.path(), &["gen", "uniform", "100", "2", "7"]);
    assert_eq!(a, ok(dir.path(), &["gen", "uniform", "100", "2", "7"]));
    let rows = data_lines(&a);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r.split_whitespace().count() == 2));
    let c = ok(dir.path(), &["gen", "clustered", "100", "2", "7"]);
    assert_eq!(c, ok(dir.path(), &["gen", "clustered", "100", "2", "7"]));
    let cube = ok(dir.path(), &["gen", "uniform", "1000", "3", "1"]);
    for row in data_lines(&cube) {
        for v in row.split_whitespace() {
            let v: f64 = v.parse().unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
    }
    let labeled = ok(dir.path(), &["gen", "annulus", "50", "2", "3", "--labels", "random"]);
    assert!(data_lines(&labeled).iter().all(|r| r.ends_with(" 1") || r.ends_with(" 2")));
}

#[test]
fn separate_reports_a_verified_separator() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["gen", "uniform", "500", "2", "7", "-o", "u.pts"]);
    ok(dir.path(), &["separate", "u.pts", "--seed", "7", "--json", "s.json", "--svg", "s.svg"]);
    let rec = json(dir.path().join("s.json"));
    assert_eq!(rec["schema"], "vsep/1");
    assert_eq!(rec["command"], "separate");
    assert_eq!(rec["verdicts"]["separated"], true);
    assert_eq!(rec["instance_digest"].as_str().unwrap().len(), 64);
    let svg = std::fs::read_to_string(dir.path().join("s.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("seagreen"));
}

#[test]
fn verify_detects_a_deleted_guard() {
    let dir = TempDir::new().unwrap();
    let pts = two_point(dir.path());
    ok(dir.path(), &["exact", pts, "--budget", "1", "--guards-out", "g.pts", "--json", "e.json"]);
    assert_eq!(json(dir.path().join("e.json"))["output_sizes"]["guards"], 1);
    ok(dir.path(), &["verify", pts, "g.pts", "--json", "v.json"]);
    std::fs::write(dir.path().join("none.pts"), "# all guards deleted\n").unwrap();
    let out = vsep(dir.path(), &["verify", pts, "none.pts", "--json", "bad.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("points 0 and 1"));
    let rec = json(dir.path().join("bad.json"));
    assert_eq!(rec["verdicts"]["separated"], false);
    assert_eq!(rec["result"]["witness"]["p1"], 0);
}

#[test]
fn verify_detects_deletion_from_a_greedy_separator() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["gen", "uniform", "20", "2", "4", "--labels", "halfplane", "-o", "h.pts"]);
    ok(dir.path(), &["greedy", "h.pts", "--guards-out", "g.pts", "--json", "g.json"]);
    let guards = std::fs::read_to_string(dir.path().join("g.pts")).unwrap();
    let rows = data_lines(&guards);
    let broken = (0..rows.len()).any(|skip| {
        let kept: String = rows.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| format!("{r}\n")).collect();
        std::fs::write(dir.path().join("t.pts"), kept).unwrap();
        code(&vsep(dir.path(), &["verify", "h.pts", "t.pts", "--json", "t.json"])) == 2
    });
    assert!(broken, "no single deletion broke the separator");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let pts = two_point(dir.path());
    std::fs::write(dir.path().join("bad.pts"), "0 0 1\n1 zero 2\n").unwrap();
    assert_eq!(code(&vsep(dir.path(), &["greedy", "bad.pts"])), 1);
    assert_eq!(code(&vsep(dir.path(), &["greedy", "missing.pts"])), 1);
    assert_eq!(code(&vsep(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&vsep(dir.path(), &["exact", pts, "--budget", "0"])), 2);
    assert_eq!(code(&vsep(dir.path(), &["localsearch", pts, "--ell", "7"])), 3);
    assert_eq!(code(&vsep(dir.path(), &["--help"])), 0);
}

#[test]
fn config_precedence_flag_over_env_over_default() {
    let dir = TempDir::new().unwrap();
    let pts = two_point(dir.path());
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_vsep"));
        cmd.current_dir(dir.path()).args(["ptas", pts, "--json", "p.json"]);
        cmd.env_remove("VSEP_C_PTAS");
        if let Some(v) = env {
            cmd.env("VSEP_C_PTAS", v);
        }
        if let Some(v) = flag {
            cmd.args(["--c-ptas", v]);
        }
        assert!(cmd.status().unwrap().success());
        json(dir.path().join("p.json"))["parameters"]["config"]["c_ptas"].as_f64().unwrap()
    };
    assert_eq!(run(None, None), 4.0);
    assert_eq!(run(Some("7"), None), 7.0);
    assert_eq!(run(Some("7"), Some("5")), 5.0);
}

#[test]
fn replay_is_bitwise_identical() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["gen", "clustered", "30", "2", "9", "--labels", "random", "-o", "c.pts"]);
    for cmd in [
        vec!["greedy", "c.pts"],
        vec!["ptas", "c.pts", "--eps", "1", "--seed", "3"],
        vec!["localsearch", "c.pts", "--ell", "1", "--seed", "3"],
    ] {
        let mut a = cmd.clone();
        a.extend(["--json", "a.json"]);
        let mut b = cmd.clone();
        b.extend(["--json", "b.json"]);
        ok(dir.path(), &a);
        ok(dir.path(), &b);
        let (ra, rb) = (json(dir.path().join("a.json")), json(dir.path().join("b.json")));
        assert_eq!(ra["result"], rb["result"], "{cmd:?}");
        assert_eq!(ra["instance_digest"], rb["instance_digest"]);
        assert_eq!(ra["verdicts"]["separated"], true);
    }
}

#[test]
fn localsearch_on_disks() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("d.txt"), "0 0 1\n1 0 1\n0.5 0.8 1\n10 10 1\n").unwrap();
    ok(dir.path(), &["localsearch", "--disks", "d.txt", "--ell", "3", "--json", "l.json"]);
    let rec = json(dir.path().join("l.json"));
    assert_eq!(rec["verdicts"]["stabbed"], true);
    assert_eq!(rec["output_sizes"]["points"], 2);
}

#[test]
fn bench_writes_sorted_csv() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &["bench", "--min-exp", "8", "--max-exp", "9", "--seeds", "3", "--csv", "b.csv", "--json", "b.json"],
    );
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,d,seed,size,n_pow,ratio,ms");
    assert_eq!(lines.len(), 7);
    let keys: Vec<(usize, u64)> = lines[1..]
        .iter()
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].parse().unwrap(), c[2].parse().unwrap())
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let rec = json(dir.path().join("b.json"));
    assert!(rec["result"]["spread"].as_f64().unwrap() >= 1.0);
}
