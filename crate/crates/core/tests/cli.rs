//! Exit codes, determinism and report format of the `slitcarpet` binary.

use std::process::{Command, Output};

use slitcarpet::report::{Report, HEADER};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slitcarpet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Report {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(HEADER));
    Report::parse(&text).unwrap()
}

#[test]
fn distance_across_the_slit() {
    let r = report(&[
        "--level",
        "1",
        "dist",
        "--p",
        "0.5,0.5,L",
        "--q",
        "0.5,0.5,R",
    ]);
    assert_eq!(r.get(0, "distance"), Some("0.5"));
}

#[test]
fn build_lists_every_slit() {
    let out = run(&["--level", "3", "build"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# slitcarpet-schedule v1"));
    assert_eq!(lines.count(), 21);
}

#[test]
fn unit_square_conductance() {
    let r = report(&["--level", "0", "conductance", "--dir", "LR"]);
    assert_eq!(r.get(0, "value"), Some("1.0"));
}

#[test]
fn seeded_scans_are_reproducible() {
    let args = ["--level", "2", "--seed", "7", "scan-porosity"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn group_table_has_eight_rows() {
    let r = report(&["group", "--ambient", "DS2", "--table"]);
    assert_eq!(r.get(0, "order"), Some("8"));
    let rows = r.records().iter().filter(|rec| rec[0].0 == "row").count();
    assert_eq!(rows, 8);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(&["dist", "--p", "abc", "--q", "0,0"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["group", "--ambient", "S3"]).status.code(), Some(2));
}

#[test]
fn invalid_shear_exits_with_two() {
    let out = run(&["shear", "--h", "2 0 0 1/2 0 0", "--p", "0.25,0.25,front"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn passing_checks_exit_with_zero() {
    let out = run(&["--level", "2", "verify", "cohopf"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&["verify", "signature", "--x", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("curves=4"));
}

#[test]
fn render_writes_svg() {
    let dir = std::env::temp_dir().join(format!("slitcarpet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q2.svg");
    let out = run(&["--level", "2", "--out", path.to_str().unwrap(), "render"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    std::fs::remove_dir_all(&dir).unwrap();
}
