use std::process::{Command, Output};

use coupon_core::harness::read_csv;

fn coupon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coupon")).args(args).output().expect("spawn coupon")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no {key:?} line in:\n{text}"))
}

#[test]
fn run_recovers_worked_example_code() {
    let o = coupon(&["run", "--qubits", "5", "--missing", "0b01110", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("status=Unique solution=01110 element=14 "), "{text}");
    assert_eq!(field(&text, "pauli"), "I⊗Z⊗Z⊗Z⊗I");
    let rounds: usize = field(&text, "rounds").parse().unwrap();
    assert!(rounds >= 4);
    assert_eq!(field(&text, "copies").parse::<usize>().unwrap(), 2 * rounds);
    assert!(field(&text, "prep_attempts").parse::<usize>().unwrap() >= 1);
}

#[test]
fn single_qubit_run_finishes_after_one_round() {
    let o = coupon(&["run", "-b", "1", "--missing", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("solution=1 element=1"));
    assert_eq!(field(&text, "rounds"), "1");
}

#[test]
fn run_accepts_element_count() {
    let o = coupon(&["run", "--n", "20", "--missing", "19", "--seed", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("solution=10011 element=19"));
}

#[test]
fn run_is_reproducible() {
    let args = ["run", "--qubits", "12", "--missing", "3001", "--seed", "99"];
    assert_eq!(coupon(&args).stdout, coupon(&args).stdout);
}

#[test]
fn exhausted_round_budget_exits_one() {
    let o = coupon(&["run", "--qubits", "16", "--missing", "12345", "--max-rounds", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("status=Ambiguous"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Ambiguous"));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        vec!["run", "--qubits", "5", "--missing", "0"],
        vec!["run", "--qubits", "5", "--missing", "32"],
        vec!["run", "--n", "20", "--missing", "20"],
        vec!["run", "--qubits", "5", "--n", "32", "--missing", "3"],
        vec!["run", "--missing", "3"],
        vec!["run", "--qubits", "5", "--missing", "3", "--max-rounds", "0"],
        vec!["estimate", "--qubits", "5", "--missing", "14", "--sigma", "0111"],
        vec!["sweep", "--b-min", "5", "--b-max", "25"],
        vec!["sweep", "--b-min", "2", "--b-max", "3", "--out", "/nonexistent-dir/x.csv"],
        vec!["baseline", "--n", "0"],
        vec!["replay", "--log", "/nonexistent-dir/log.txt"],
        vec!["--threads", "0", "example"],
    ] {
        let o = coupon(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn example_prints_both_matrices() {
    let o = coupon(&["example"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("G =\n01101\n01010\n11010\n00001\n00000\n11101\n"));
    assert!(text.contains("G' =\n10000\n01010\n00110\n00001\n00000\n00000\n"));
    for line in ["x1 = 0", "x2 = 1", "x3 = 1", "x4 = 1", "x5 = 0", "P = I⊗Z⊗Z⊗Z⊗I"] {
        assert!(text.contains(line), "missing {line}");
    }
}

#[test]
fn estimate_values() {
    let base = ["estimate", "--qubits", "5", "--missing", "14", "--rounds", "10000", "--seed", "2"];
    let run = |sigma: &str| {
        let mut args = base.to_vec();
        args.extend(["--sigma", sigma]);
        let o = coupon(&args);
        assert_eq!(o.status.code(), Some(0));
        field(&stdout(&o), "estimate").parse::<f64>().unwrap()
    };
    assert_eq!(run("IZZZI"), 1.0);
    assert_eq!(run("0b01110"), 1.0);
    assert_eq!(run("00000"), 1.0);
    for sigma in ["ZIIII", "IZIII", "ZZZZZ", "IIIIZ", "IZZIZ"] {
        assert!(run(sigma).abs() < 0.03, "{sigma}");
    }
}

#[test]
fn baseline_reports_harmonic_expectation() {
    let o = coupon(&["baseline", "--n", "64", "--trials", "10000", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mean: f64 = field(&text, "mean_draws").parse().unwrap();
    let expected: f64 = field(&text, "expected_n_h_n").parse().unwrap();
    assert!((expected - 303.6).abs() < 0.05);
    assert!((mean - expected).abs() / expected < 0.02);
}

#[test]
fn records_written_by_run_replay_to_the_same_result() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("rounds.log");
    let o = coupon(&["run", "--qubits", "8", "--missing", "0b10110011", "--seed", "5", "--records-out", log.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let summary = stdout(&o).lines().next().unwrap().to_string();
    let text = std::fs::read_to_string(&log).unwrap();
    let first = text.lines().next().unwrap();
    assert_eq!(first.split(' ').count(), 9, "round index plus 8 codes: {first}");
    let r = coupon(&["replay", "--log", log.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout(&r).trim(), summary);
}

#[test]
fn replay_of_truncated_log_is_a_decode_failure() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("short.log");
    std::fs::write(&log, "0 00 10 10 00\n").unwrap();
    let r = coupon(&["replay", "--log", log.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    assert!(stdout(&r).starts_with("status=Ambiguous"));
}

#[test]
fn sweep_csv_schema_and_properties() {
    let o = coupon(&["sweep", "--b-min", "4", "--b-max", "12", "--trials", "500", "--seed", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "b,n,trials,mean_rounds,stddev_rounds,mean_copies,success_rate,wall_time,mean_prep_attempts,classical_mean"
    );
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 9);
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.b as f64, r.mean_rounds)).collect();
    let (slope, _) = coupon_core::harness::linear_fit(&pts);
    assert!((slope - 1.0).abs() <= 0.3, "slope {slope}");
    for r in &rows {
        assert_eq!(r.n, 1 << r.b);
        assert_eq!(r.mean_copies, 2.0 * r.mean_rounds);
        assert!(r.success_rate >= 0.99);
        assert_eq!(r.wall_time, 0.0);
        assert!((r.mean_prep_attempts - 2.0).abs() < 0.3);
    }
    let at64 = rows.iter().find(|r| r.b == 6).unwrap().classical_mean.unwrap();
    assert!((at64 - 303.6).abs() / 303.6 < 0.05, "{at64}");
}

#[test]
fn sweep_timing_flag_fills_wall_time() {
    let o = coupon(&["sweep", "--b-min", "18", "--b-max", "18", "--trials", "20", "--timing"]);
    let rows = read_csv(stdout(&o).as_bytes()).unwrap();
    assert!(rows[0].wall_time > 0.0);
    assert!(rows[0].classical_mean.is_none());
}
