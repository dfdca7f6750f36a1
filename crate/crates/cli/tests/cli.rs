//! End-to-end runs of the compiled binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multilim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn rank_of_the_sixth_root_pair_is_three() {
    let out = run(&["rank", "--omega1", "1/6", "--omega2", "5/6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "rank\n3\n");
}

#[test]
fn eval_fibonacci_reaches_eight_fifths() {
    let out = run(&["eval", "--cf", "fibonacci", "--N", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("4,"));
    assert!(last.contains("8.0000000000000000e0"));
    assert!(last.contains("5.0000000000000000e0"));
    // 8/5 at full precision; the 17th digit of the quotient rounds up
    assert!(last.contains("1.6000000000000001e0"));
}

#[test]
fn limits_emits_six_rows_with_three_distinct_values() {
    let out = run(&[
        "limits",
        "--omega1",
        "1/6",
        "--omega2",
        "5/6",
        "--p",
        "ramanujan:q=0.2",
        "--q",
        "zero",
        "--tol",
        "1e-9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    let mut values: Vec<(i64, i64)> = rows
        .iter()
        .map(|row| {
            let f: Vec<&str> = row.split(',').collect();
            assert_eq!(f[7], "false");
            let re: f64 = f[5].parse().unwrap();
            let im: f64 = f[6].parse().unwrap();
            ((re * 1e6).round() as i64, (im * 1e6).round() as i64)
        })
        .collect();
    values.sort();
    values.dedup();
    assert_eq!(values.len(), 3);
}

#[test]
fn json_and_csv_carry_identical_numbers() {
    let args = [
        "limits", "--omega1", "1/6", "--omega2", "5/6", "--p", "geometric:r=0.5",
    ];
    let csv = stdout(&run(&args));
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json = stdout(&run(&json_args));
    assert!(json.starts_with("{\"config\":{\"command\":\"limits\""));
    assert!(json.contains("\"residuals\""));
    for field in csv.lines().nth(1).unwrap().split(',').take(7).skip(1) {
        assert!(json.contains(field), "{field} missing from JSON");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "limits", "--omega1", "1/5", "--omega2", "4/5", "--q", "geometric:r=0.5",
        "--format", "json",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn exhausted_block_budget_exits_two() {
    let out = run(&[
        "limits",
        "--omega1",
        "1/6",
        "--omega2",
        "5/6",
        "--p",
        "geometric:r=0.99",
        "--kmax",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_turn_fraction_exits_one() {
    let out = run(&["rank", "--omega1", "x/y", "--omega2", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn unknown_flag_exits_one_and_help_exits_zero() {
    assert_eq!(run(&["rank", "--bogus", "1"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn qlimits_and_ramanujan_emit_one_row_per_class() {
    let out = run(&["qlimits", "--m", "5", "--q", "0.15"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 6);

    let out = run(&["ramanujan", "--m", "5", "--q", "0.15"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 6);
}

#[test]
fn poincare_emits_six_classes_for_the_sixth_root_pair() {
    let out = run(&[
        "poincare",
        "--omega1",
        "1/6",
        "--omega2",
        "5/6",
        "--a",
        "geometric:r=0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 7);
}

#[test]
fn bernoulli_reports_tiny_residuals() {
    let out = run(&["bernoulli", "--targets", "1,0;2,0;0.5,0.5;-1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    for row in text.lines().skip(1) {
        let residual: f64 = row.split(',').last().unwrap().parse().unwrap();
        assert!(residual < 1e-10);
    }
}

#[test]
fn verify_battery_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().count() > 4);
    assert!(!text.contains("false"));
}

#[test]
fn out_flag_writes_the_table_to_a_file() {
    let path = std::env::temp_dir().join("multilim_cli_rank_test.csv");
    let _ = std::fs::remove_file(&path);
    let out = run(&[
        "rank",
        "--omega1",
        "1/8",
        "--omega2",
        "7/8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "rank\n4\n");
    let _ = std::fs::remove_file(&path);
}
