use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsebeam"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

#[test]
fn overhead_worked_example() {
    let text = stdout(&bin(&[
        "overhead",
        "--antennas",
        "1025",
        "--interval",
        "32",
        "--ranges",
        "5",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(&lines[..3], ["three_phase 70", "exhaustive 5280", "two_phase 1061"]);
}

#[test]
fn optimal_interval() {
    let text = stdout(&bin(&["optimal-u", "--antennas", "257", "--ranges", "5"]));
    assert_eq!(text.lines().next(), Some("optimal_interval 16"));
    let text = stdout(&bin(&["optimal-u", "--antennas", "1025", "--ranges", "5"]));
    assert_eq!(text.lines().next(), Some("optimal_interval 32"));
}

#[test]
fn pattern_with_closed_form() {
    let text = stdout(&bin(&[
        "pattern",
        "--range",
        "20",
        "--angle",
        "-0.1",
        "--interval",
        "16",
        "--closed-form",
        "--points",
        "50",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,exact,closed_form"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r.len() == 3 && (0.0..=1.0 + 1e-12).contains(&r[1])));
}

#[test]
fn run_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let sc = scenario("fig7.scenario");
    let outs: Vec<String> = ["a.csv", "b.csv"]
        .iter()
        .map(|name| {
            let path = dir.path().join(name);
            let args = [
                "run",
                sc.to_str().unwrap(),
                "--trials",
                "1",
                "--seed",
                "7",
                "--out",
                path.to_str().unwrap(),
            ];
            stdout(&bin(&args));
            std::fs::read_to_string(path).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    assert!(outs[0].starts_with("scheme,sweep_variable,sweep_value,"));
}

#[test]
fn run_emits_json_to_stdout() {
    let sc = scenario("fig10.scenario");
    let text = stdout(&bin(&[
        "run",
        sc.to_str().unwrap(),
        "--trials",
        "1",
        "--format",
        "json",
        "--threads",
        "2",
    ]));
    assert!(text.trim_start().starts_with('{'));
    assert!(text.contains("\"rows\""));
}

#[test]
fn usage_errors_exit_nonzero() {
    assert!(!bin(&["overhead", "--antennas", "1025"]).status.success());
    let out = bin(&["overhead", "--antennas", "1025", "--interval", "31", "--ranges", "5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert!(!bin(&["run", "/nonexistent.scenario"]).status.success());
}
