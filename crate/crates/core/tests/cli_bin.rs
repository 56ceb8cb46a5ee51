//! End-to-end checks of the `ltlab` binary: artifacts, exit codes,
//! byte-for-byte reproducibility and warm-cache behaviour.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ltlab"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ltlab-bin-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn bounds_emits_profiles() {
    let dir = tmpdir("bounds");
    let status = bin()
        .args(["bounds", "--n", "1,2", "--regime", "grh"])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = read(&dir.join("bound_profiles.csv"));
    assert!(csv.contains("1,grh,false,1,12"));
    assert!(csv.contains("2,grh,false,2,23"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn census_reproducible() {
    let dir = tmpdir("census");
    for _ in 0..2 {
        let status = bin()
            .args(["census", "--ell", "5,7,11,13", "--n", "1"])
            .args(["--out", dir.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let csv = read(&dir.join("census.csv"));
    assert!(csv.starts_with("set_name,ell,n,exact_count,formula_count,slope,slope_target"));
    assert!(csv.contains("borel,5,1,40000,"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn curve_scan_warm_cache_is_bit_identical() {
    let dir = tmpdir("scan");
    let cache = dir.join("cache.csv");
    let run = || {
        let status = bin()
            .args(["curve-scan", "--pmax", "250"])
            .args(["--cache", cache.to_str().unwrap()])
            .args(["--out", dir.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
        read(&dir.join("records_c1.csv"))
    };
    let cold = run();
    assert!(cache.exists());
    let warm = run();
    assert_eq!(cold, warm, "warm cache rerun is byte-identical");
    // record CSV format: p,a_p,b_p,c0,c1,c2,c3
    let first_row = cold.lines().nth(1).unwrap();
    let fields: Vec<&str> = first_row.split(',').collect();
    assert_eq!(fields.len(), 7);
    let p: i64 = fields[0].parse().unwrap();
    let a: i64 = fields[1].parse().unwrap();
    let c1: i64 = fields[4].parse().unwrap();
    let c3: i64 = fields[6].parse().unwrap();
    assert_eq!(fields[3].parse::<i64>().unwrap(), p * p);
    assert_eq!(c1, -a * p);
    assert_eq!(c3, -a);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn validation_errors_exit_one() {
    let dir = tmpdir("err");
    // class sizes not summing to the group order
    let out = bin()
        .args([
            "simulate",
            "--group-order",
            "10",
            "--class-sizes",
            "a=3,b=3",
            "--x",
            "100",
        ])
        .args(["--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("code=validation"), "{stderr}");
    // unknown flag also exits 1
    let out = bin().args(["census", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn simulate_stream_dump() {
    let dir = tmpdir("sim");
    let status = bin()
        .args(["simulate", "--group-order", "4", "--class-sizes", "e=1,r=3"])
        .args(["--x", "10000", "--seed", "9"])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = read(&dir.join("stream.csv"));
    assert!(csv.starts_with("p,class_label\n"));
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), ltlab::arith::sieve_primes(10000).len());
    assert!(rows.iter().all(|r| r.ends_with(",e") || r.ends_with(",r")));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn twists_synthetic_demo() {
    let dir = tmpdir("twists");
    let status = bin()
        .args(["twists", "--synthetic", "2", "--modulus-bound", "5"])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let report = read(&dir.join("twists.csv"));
    assert!(report.contains("twists,2"), "{report}");
    assert!(report.contains("f_degree,1"));
    assert!(report.contains("kernel_field,m=5,degree=2,S=1;4"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn lt_count_report() {
    let dir = tmpdir("lt");
    let status = bin()
        .args(["lt-count", "--pmax", "2000", "--a", "0,1", "--ell", "5,13"])
        .args(["--x", "500,1000,2000"])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = read(&dir.join("lt_report.csv"));
    assert!(csv.starts_with("x,a,count,pi_x_a_l_max,curve_uncond,curve_grh"));
    assert_eq!(csv.lines().count(), 1 + 2 * 3);
    std::fs::remove_dir_all(dir).ok();
}
