use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhf-fie"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// CSV text without the runtime_ms column.
fn without_runtime(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.remove(6);
            f.join(",")
        })
        .collect()
}

#[test]
fn nodes_prints_header_and_rows() {
    let o = run(&["nodes", "--alpha", "0.5", "--n", "4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "j,z,x,chi");
    assert_eq!(lines.len(), 6);
    assert!(lines[3].starts_with("2,0,0.5,"));
}

#[test]
fn converge_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = run(&["converge", "--problem", "ex1-log", "--n-list", "8,4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("N,NI,alpha,err_inf,err_l2chi,newton_iters,runtime_ms\n"));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("4,4,"));
    assert!(rows[1].starts_with("8,8,"));
    assert!(Path::new(&format!("{}.meta.toml", out.display())).exists());
}

#[test]
fn converge_is_deterministic_apart_from_timing() {
    let args = ["converge", "--problem", "ex1-alg", "--n-list", "4,8,12"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    let a = String::from_utf8(a.stdout).unwrap();
    let b = String::from_utf8(b.stdout).unwrap();
    assert_eq!(without_runtime(&a), without_runtime(&b));
}

#[test]
fn failed_solves_give_nan_rows_and_exit_one() {
    let o = run(&["converge", "--problem", "ex1-log", "--n-list", "6", "--newton-tol", "1e-300"]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("6,6,"));
    assert_eq!(row.split(',').nth(3), Some("nan"));
    assert_eq!(row.split(',').nth(5), Some("nan"));
}

#[test]
fn unknown_problem_is_a_usage_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = run(&["converge", "--problem", "ex9", "--n-list", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains("ex9"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&run(&["solve", "--problem", "ex1-log", "--n", "8", "--method", "spline"])), 2);
    assert_eq!(code(&run(&["solve", "--problem", "ex1-log", "--n", "8", "--alpha", "-1"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["nodes", "--alpha", "x"])), 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "problem = \"ex1-log\"\nalpha = 0.5\nn_list = [4, 8]\nmethod = \"smoothed\"\n").unwrap();
    let o = run(&["converge", "--config", cfg.to_str().unwrap(), "--n-list", "6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("6,6,0.5,"));

    std::fs::write(&cfg, "problem = \"ex1-log\"\nsolver = \"fast\"\n").unwrap();
    assert_eq!(code(&run(&["converge", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn solve_and_compare_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("u.csv");
    let o = run(&["solve", "--problem", "ex1-alg", "--n", "12", "--dump", dump.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("newton_iters: "));
    assert!(std::fs::read_to_string(&dump).unwrap().starts_with("x,u\n"));

    let o = run(&["compare", "--problem", "ex1-log", "--n-list", "4,8"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("N,NI,alpha,max_diff,pass\n"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",true")).count(), 2);
}

#[test]
fn quad_test_reports_errors() {
    let o = run(&["quad-test", "--alpha", "1", "--n-list", "4,16", "--integrand", "moments", "--k", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("N,value,error\n"));
    let err: f64 = text.lines().nth(2).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!(err.abs() < 1e-12);
}
