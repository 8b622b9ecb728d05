use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn xab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xab"))
        .args(args)
        .env("XAB_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn orbit_csv_lists_grid() {
    let o = xab(&["orbit", "-a", "2", "-b", "3", "-x", "1/7", "-N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# seed=0");
    assert_eq!(lines[1], "m,n,point");
    assert_eq!(lines.len(), 2 + 9);
    assert_eq!(lines[2 + 4], "1,1,6/7");
    assert!(!text.contains('\r'));
}

#[test]
fn count_r_prints_bare_integer() {
    let o = xab(&["count-r", "-k", "2", "-N", "10", "-t", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    // H(1/10) = 0.325 but H(2/10) = 0.5004 nats, so at most one minority symbol: 2 * (1 + 10)
    assert_eq!(stdout(&o), "22\n");
}

#[test]
fn kt_bound_json_and_dependence_warning() {
    let o = xab(&["kt-bound", "-a", "4", "-b", "2", "-t", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["bound"].as_f64().unwrap() - 0.596157).abs() < 1e-5);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn q_bound_value() {
    let v = json(&xab(&["q-bound", "-a", "2", "-t", "0.3"]));
    let expect = 0.6 / (2f64.ln() + 0.3);
    assert!((v["bound"].as_f64().unwrap() - expect).abs() < 1e-12);
}

#[test]
fn moran_dim_of_periodic_structure() {
    let v = json(&xab(&["moran-dim", "--spec", "n=2,4;c=1/4 periodic"]));
    assert_eq!(v["s1"].as_f64(), Some(0.75));
    assert_eq!(v["s2"].as_f64(), Some(0.75));
    assert_eq!(v["exact"].as_bool(), Some(true));
}

#[test]
fn box_dim_of_middle_thirds() {
    let o = xab(&[
        "box-dim",
        "--spec",
        "n=2;c=1/3 periodic",
        "--depth",
        "8",
        "--scales",
        "1/27,1/81,1/243,1/729",
    ]);
    let est = json(&o)["estimate"].as_f64().unwrap();
    assert!((est - 3f64.ln().recip() * 2f64.ln()).abs() < 1e-9);
}

#[test]
fn precondition_failures_exit_one() {
    for args in [
        &["kt-bound", "-a", "2", "-b", "3", "-t", "0.5"][..],
        &["orbit", "-x", "1/0", "-N", "2"],
        &["moran-dim", "--spec", "n=2;c=2/3 periodic"],
        &["count-r", "-k", "0", "-N", "3", "-t", "0.1"],
    ] {
        let o = xab(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_sixty_four() {
    assert_eq!(xab(&["nope"]).status.code(), Some(64));
    assert_eq!(xab(&["orbit", "-x", "1/3"]).status.code(), Some(64));
    assert_eq!(
        xab(&["--format", "xml", "orbit", "-x", "1/3", "-N", "2"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(xab(&["--help"]).status.code(), Some(0));
    assert_eq!(xab(&["--version"]).status.code(), Some(0));
}

#[test]
fn equidist_failure_exits_two() {
    // 1/3 alternates between 1/3 and 2/3 under doubling and never enters (0, 1/4)
    let o = xab(&[
        "equidist",
        "-x",
        "1/3",
        "--target",
        "0,1/4",
        "--horizons",
        "10,40",
        "-t",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["report"]["pass"].as_bool(), Some(false));
}

#[test]
fn fourier_defects_respect_bound() {
    let v = json(&xab(&[
        "fourier",
        "-x",
        "5/13",
        "-k",
        "-3",
        "--horizons",
        "7,20",
    ]));
    for row in v["averages"].as_array().unwrap() {
        let bound = row["bound"].as_f64().unwrap();
        assert!(row["defect_a"].as_f64().unwrap() <= bound + 1e-12);
        assert!(row["defect_b"].as_f64().unwrap() <= bound + 1e-12);
    }
}

#[test]
fn synthesis_round_trips_through_verification() {
    let o = xab(&["--seed", "9", "synth-irregular", "--depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["seed"].as_u64(), Some(9));

    let mut child = Command::new(env!("CARGO_BIN_EXE_xab"))
        .args(["verify-irregular", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&o.stdout).unwrap();
    let verified = child.wait_with_output().unwrap();
    assert_eq!(verified.status.code(), Some(0));
    assert_eq!(json(&verified)["report"]["pass"].as_bool(), Some(true));

    // zeroing every digit destroys the level averages
    let mut v = json(&o);
    let word = v["word"].as_str().unwrap().to_string();
    let (base, digits) = word.split_once(':').unwrap();
    v["word"] = Value::String(format!("{base}:{}", "0".repeat(digits.len())));
    let dir = std::env::temp_dir().join(format!("xab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tampered.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let bad = xab(&["verify-irregular", "--input", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| xab(&["--seed", "3", "synth-irregular", "--depth", "1"]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    let a = xab(&["empirical", "-x", "2/11", "-N", "30", "--format", "csv"]).stdout;
    let b = xab(&["empirical", "-x", "2/11", "-N", "30", "--format", "csv"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn growth_stays_under_bound() {
    let o = xab(&[
        "growth",
        "-k",
        "3",
        "-t",
        "0.7",
        "--horizons",
        "5,50,200",
        "--format",
        "json",
    ]);
    for p in json(&o)["profile"].as_array().unwrap() {
        assert!(p["value"].as_f64().unwrap() <= p["bound"].as_f64().unwrap() + 1e-12);
    }
}

#[test]
fn itinerary_decimation_identity() {
    let v = json(&xab(&[
        "itinerary",
        "-a",
        "3",
        "-x",
        "4/13",
        "-d",
        "3",
        "-M",
        "2",
        "-N",
        "40",
    ]));
    assert_eq!(v["decimation_identity"].as_bool(), Some(true));
    assert_eq!(v["record"]["indices"].as_array().unwrap().len(), 40);
}
