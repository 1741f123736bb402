//! End-to-end exercises of the CLI surface: subcommands, file formats,
//! and the BENCH_JOBS override.

use std::path::PathBuf;
use std::process::Command;

fn bench_bin() -> PathBuf {
    // target/<profile>/bench sits two levels up from this test executable
    let mut p = std::env::current_exe().unwrap();
    p.pop();
    p.pop();
    p.push(format!("bench{}", std::env::consts::EXE_SUFFIX));
    p
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("smcg_cli_tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn run_then_profile_round_trip() {
    let out = tmp("results.csv");
    let json = tmp("results.json");
    let status = Command::new(bench_bin())
        .args([
            "run",
            "--solvers",
            "smcg,steepest",
            "--problems",
            "rosenbrock_2,beale,quad_n2_k10",
            "--tol",
            "1e-6",
            "--max-iter",
            "20000",
            "--out",
            out.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "solver,problem,n_iter,n_f,n_g,t_cpu,success,final_gnorm"
    );
    assert_eq!(lines.count(), 6, "2 solvers x 3 problems");

    // records mirror to JSON verbatim
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 6);

    let svg = tmp("profile.svg");
    let pcsv = tmp("profile.csv");
    let status = Command::new(bench_bin())
        .args([
            "profile",
            "--metric",
            "nf_plus_3ng",
            "--in",
            out.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
            "--csv",
            pcsv.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("<polyline").count(), 2);
    assert!(svg_text.contains("</svg>"));
    let pcsv_text = std::fs::read_to_string(&pcsv).unwrap();
    assert!(pcsv_text.starts_with("solver,tau,rho\n"));
    assert!(pcsv_text.lines().count() > 2);
}

#[test]
fn tau_comparison_single_command() {
    // the experiment-1 style comparison comes from one run invocation
    let out = tmp("tau.csv");
    let status = Command::new(bench_bin())
        .args([
            "run",
            "--solvers",
            "smcg,smcg_b,smcg_h,smcg_1",
            "--problems",
            "beale,wood,quad_n20_k1000",
            "--max-iter",
            "20000",
            "--out",
            out.to_str().unwrap(),
            "--jobs",
            "4",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 13); // header + 4 x 3
}

#[test]
fn bench_jobs_env_overrides_flag() {
    let out = tmp("envjobs.csv");
    let status = Command::new(bench_bin())
        .env("BENCH_JOBS", "4")
        .args([
            "run",
            "--solvers",
            "smcg",
            "--problems",
            "beale,wood,trig_10,rosenbrock_2",
            "--out",
            out.to_str().unwrap(),
            "--jobs",
            "1",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    // records stay sorted and complete regardless of scheduling
    let csv = std::fs::read_to_string(&out).unwrap();
    let problems: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    let mut sorted = problems.clone();
    sorted.sort();
    assert_eq!(problems, sorted);
    assert_eq!(problems.len(), 4);
}

#[test]
fn unknown_names_are_rejected_before_running() {
    let out = tmp("never.csv");
    let status = Command::new(bench_bin())
        .env("RUST_BACKTRACE", "0")
        .args([
            "run",
            "--solvers",
            "nonsense",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(!status.success());
    assert!(!out.exists());
}

#[test]
fn options_json_is_honored() {
    let opts = tmp("opts.json");
    std::fs::write(&opts, r#"{"max_iter": 2, "eps_grad": 1e-6}"#).unwrap();
    let out = tmp("capped.csv");
    let status = Command::new(bench_bin())
        .args([
            "run",
            "--solvers",
            "smcg",
            "--problems",
            "rosenbrock_2",
            "--max-iter",
            "5",
            "--out",
            out.to_str().unwrap(),
            "--options",
            opts.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    // the --max-iter flag overrides the file value
    let csv = std::fs::read_to_string(&out).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert_eq!(row.split(',').nth(2).unwrap(), "5");

    // a malformed file is rejected
    std::fs::write(&opts, r#"{"delta": 0.9, "sigma": 0.1}"#).unwrap();
    let status = Command::new(bench_bin())
        .env("RUST_BACKTRACE", "0")
        .args([
            "run",
            "--solvers",
            "smcg",
            "--problems",
            "beale",
            "--out",
            out.to_str().unwrap(),
            "--options",
            opts.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(!status.success());
}

#[test]
fn check_quick_passes() {
    let output = Command::new(bench_bin())
        .args(["check", "--quick"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("all 10 checks passed"), "{stdout}");
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn list_shows_solvers_and_corpus() {
    let output = Command::new(bench_bin()).args(["list"]).output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    for name in ["smcg", "smcg_b", "smcg_h", "smcg_1", "hz", "dk", "steepest"] {
        assert!(stdout.contains(name));
    }
    assert!(stdout.contains("rosenbrock_2"));
    assert!(stdout.contains("quad_n1000_k100000"));
}
