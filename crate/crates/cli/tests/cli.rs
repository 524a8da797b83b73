use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qpmid(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpmid"))
        .args(args)
        .current_dir(dir)
        .env_remove("QPMID_THREADS")
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str], dir: &Path) -> Value {
    let out = qpmid(args, dir);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn diagnostic(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is a JSON diagnostic")
}

#[test]
fn first_order_design_is_verified() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_ok(&["mid-design", "--n", "1", "--m", "0", "--tau", "1", "--s0", "0", "--verify"], dir.path());
    assert_eq!(v["command"], "mid-design");
    assert_eq!(v["design"]["exact"]["a"][0], "-1");
    assert_eq!(v["design"]["exact"]["alpha_reduced"][0], "1");
    assert_eq!(v["multiplicity"], 2);
    assert_eq!(v["all_equivalences_hold"], true);
    assert_eq!(v["dominant"], true);
    assert_eq!(v["s0_from_coeffs"], "0");
}

#[test]
fn decimal_arguments_are_exact() {
    let dir = tempfile::tempdir().unwrap();
    let a = json_ok(&["mid-design", "--n", "2", "--m", "1", "--tau", "0.3", "--s0", "-1.5"], dir.path());
    let b = json_ok(&["mid-design", "--n", "2", "--m", "1", "--tau", "3/10", "--s0", "-3/2"], dir.path());
    assert_eq!(a["design"], b["design"]);
    assert_eq!(a["s0_from_coeffs"], "-3/2");
}

#[test]
fn counterexample_violates_old_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_ok(&["counterexample", "--l", "1"], dir.path());
    let r = &v["report"];
    assert_eq!(r["k"], 2.5);
    assert_eq!(r["z"], 3.0);
    assert_eq!(r["sv_a_violated"], true);
    assert_eq!(r["corrected_hypothesis"], true);
}

#[test]
fn xi_crosscheck_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_ok(
        &["xi", "--n", "1", "--count", "3", "--crosscheck", "--out", "xi.csv"],
        dir.path(),
    );
    let rows = v["xi"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let first = rows[0]["zeta"].as_f64().unwrap();
    assert!((first - 8.9868189158181284).abs() < 1e-10);
    for r in rows {
        assert!(r["residual"].as_f64().unwrap() < 1e-8);
    }
    let text = std::fs::read_to_string(dir.path().join("xi.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# qpmid xi --n 1"));
    assert_eq!(lines.next().unwrap(), "index,zeta,residual");
    assert_eq!(lines.count(), 3);
}

#[test]
fn pade_pairs_are_rational_strings() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_ok(&["pade", "--n", "2", "--m", "1", "--check-remainder", "0.5,0.2"], dir.path());
    assert_eq!(v["normalized"]["den"], serde_json::json!(["6", "-4", "1"]));
    assert_eq!(v["perron"]["num"], serde_json::json!(["6", "-2"]));
    assert_eq!(v["normalized"]["contact_order"], 4);
    assert!(v["remainder_check"]["discrepancy"].as_f64().unwrap() < 1e-12);
}

#[test]
fn kummer_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_ok(&["kummer", "--a", "1", "--b", "2", "--z", "-3,1"], dir.path());
    let z = num_complex::Complex64::new(-3.0, 1.0);
    let exact = (z.exp() - 1.0) / z;
    let got = num_complex::Complex64::new(v["value"][0].as_f64().unwrap(), v["value"][1].as_f64().unwrap());
    assert!((got - exact).norm() < 1e-14);
    assert!(v["integral_oracle"]["difference"].as_f64().unwrap() < 1e-12);
}

#[test]
fn spectrum_and_simulation_from_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("q.json"),
        r#"{"version": "1", "n": 1, "m": 0, "tau": "1.5", "a": [0], "alpha": [1]}"#,
    )
    .unwrap();
    let v = json_ok(&["spectrum", "--input", "q.json", "--rect", "-1,1,-2,2"], dir.path());
    let roots = v["search"]["roots"].as_array().unwrap();
    assert_eq!(v["total_multiplicity"], 2);
    let top = roots.iter().map(|r| r["location"][0].as_f64().unwrap()).fold(f64::MIN, f64::max);
    assert!((top + 0.0218558239).abs() < 1e-8);

    let v = json_ok(
        &["simulate", "--input", "q.json", "--horizon", "40", "--dt", "0.015", "--out", "y.csv"],
        dir.path(),
    );
    let rate = v["decay"]["rate"].as_f64().unwrap();
    assert!((rate + 0.0218558239).abs() < 5e-3, "rate {rate}");
    let text = std::fs::read_to_string(dir.path().join("y.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# qpmid simulate"));
    assert_eq!(lines.next().unwrap(), "t,y");
    assert_eq!(lines.next().unwrap(), "0.0,1.0");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["mid-design", "--n", "3", "--m", "2", "--tau", "1", "--s0", "-1", "--verify"];
    let a = qpmid(&args, dir.path());
    let b = qpmid(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let curve = ["curve", "--l", "1", "--kmin", "2", "--kmax", "4", "--step", "0.25", "--out", "c.csv"];
    json_ok(&curve, dir.path());
    let first = std::fs::read(dir.path().join("c.csv")).unwrap();
    json_ok(&curve, dir.path());
    assert_eq!(first, std::fs::read(dir.path().join("c.csv")).unwrap());
}

#[test]
fn unknown_field_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"n": 1, "m": 0, "tau": 1, "a": [0], "alpha": [1], "beta": 2}"#,
    )
    .unwrap();
    let out = qpmid(&["spectrum", "--input", "bad.json", "--rect", "-1,1,-2,2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let d = diagnostic(&out);
    assert_eq!(d["error"]["kind"], "input");
    assert!(d["error"]["message"].as_str().unwrap().contains("beta"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_and_validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = qpmid(&["mid-design", "--n", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["error"]["kind"], "usage");

    let out = qpmid(&["kummer", "--a", "1", "--b", "-2", "--z", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["error"]["kind"], "invalid_parameter");

    let out = qpmid(&["mid-design", "--n", "1", "--m", "0", "--tau", "x", "--s0", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = qpmid(&["kummer", "--a", "1", "--b", "2", "--z", "800"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(diagnostic(&out)["error"]["kind"], "non_convergence");
}

#[test]
fn help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = qpmid(&["--help"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("mid-design"));
}
