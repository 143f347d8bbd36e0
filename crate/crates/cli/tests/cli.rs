use std::path::Path;
use std::process::{Command, Output};

fn dfqkd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dfqkd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn last_line(o: &Output) -> String {
    stdout(o).lines().last().unwrap_or_default().to_owned()
}

#[test]
fn dim_six() {
    let o = dfqkd(&["dim", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exact_dim 5"));
    assert_eq!(last_line(&o), "dim 6 5");
}

#[test]
fn table1_all_pass() {
    let o = dfqkd(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains(" PASS ")).count(), 10);
    assert_eq!(last_line(&o), "table1 10 10");
}

#[test]
fn gen_then_verify_genuine_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.dfvec");
    let p = path.to_str().unwrap();
    let o = dfqkd(&["gen", "111", p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("dfvec 1 6\n"));
    assert_eq!(body.lines().count(), 13);

    let o = dfqkd(&["verify-invariance", p, "100", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let summary = last_line(&o);
    let fields: Vec<&str> = summary.split_whitespace().collect();
    assert_eq!(fields[0], "invariance");
    assert!(fields[2].parse::<f64>().unwrap() >= 1.0 - 1e-10);
    assert_eq!(fields[3], "PASS");
}

#[test]
fn gen_round_trips_every_label() {
    let dir = tempfile::tempdir().unwrap();
    for label in dfqkd_core::all_labels() {
        let path = dir.path().join(format!("{label}.dfvec"));
        let o = dfqkd(&["gen", label, path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let parsed = dfqkd_core::dfvec::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let f = dfqkd_core::fidelity(&parsed, &dfqkd_core::named_state(label).unwrap()).unwrap();
        assert!((f - 1.0).abs() < 1e-12, "{label}");
    }
}

#[test]
fn verify_invariance_fails_on_non_df_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plain.dfvec");
    std::fs::write(&path, "dfvec 1 6\n000000 1 0\n").unwrap();
    let o = dfqkd(&["verify-invariance", path.to_str().unwrap(), "100", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(last_line(&o).ends_with("FAIL"));
}

#[test]
fn malformed_file_reports_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.dfvec");
    std::fs::write(&path, "dfvec 1 2\n01 0.7 0\n01 0.7 0\n").unwrap();
    let o = dfqkd(&["verify-invariance", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("duplicate"), "{err}");
}

#[test]
fn missing_file_is_usage_error() {
    let o = dfqkd(&["verify-invariance", Path::new("/nonexistent/x.dfvec").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_label_lists_valid_labels() {
    let o = dfqkd(&["gen", "bogus", "-"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("valid labels") && err.contains("hatminus"), "{err}");
}

#[test]
fn clap_usage_errors_exit_two() {
    assert_eq!(dfqkd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dfqkd(&["dim"]).status.code(), Some(2));
    assert_eq!(dfqkd(&["dim", "five"]).status.code(), Some(2));
}

#[test]
fn gen_to_stdout() {
    let o = dfqkd(&["gen", "s", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("dfvec 1 2\n01 7.0710678118654757e-1 0.0000000000000000e0\n10 -7.0710678118654757e-1"));
}

#[test]
fn bb84_machine_line_and_determinism() {
    let args = ["bb84", "--rounds", "2000", "--noise", "collective-haar", "--eve", "none", "--seed", "4"];
    let a = dfqkd(&args);
    assert_eq!(a.status.code(), Some(0));
    let line = last_line(&a);
    let fields: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(fields[0], "bb84");
    assert_eq!(fields[1], "2000");
    assert_eq!(fields[3], "0");
    assert_eq!(fields[4], "0");
    assert_eq!(stdout(&a), stdout(&dfqkd(&args)));
}

#[test]
fn bb84_with_eve() {
    let o = dfqkd(&["bb84", "--rounds", "4000", "--noise", "none", "--eve", "intercept", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("qber given eve wrong basis"));
    let qber: f64 = last_line(&o).split_whitespace().nth(4).unwrap().parse().unwrap();
    assert!((0.2..=0.3).contains(&qber), "{qber}");
}

#[test]
fn distinguish_exit_codes() {
    assert_eq!(dfqkd(&["distinguish", "hat0", "hat1", "zzxxzz"]).status.code(), Some(0));
    assert_eq!(dfqkd(&["distinguish", "hatplus", "hatminus", "xzzxzz"]).status.code(), Some(0));
    assert_eq!(dfqkd(&["distinguish", "000", "011", "zzzzzz"]).status.code(), Some(1));
    assert_eq!(dfqkd(&["distinguish", "000", "011", "zz"]).status.code(), Some(2));
}

#[test]
fn mub_reports_quarter_overlaps() {
    let o = dfqkd(&["mub"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(last_line(&o), "mub 0.25 0.25 0.25 0.25");
}
