use std::process::{Command, Output};

fn dho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dho")).args(args).output().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("one JSON object")
}

#[test]
fn classify_prints_regime() {
    let o = dho(&["classify", "-m", "1", "-c", "2", "-k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "Critical (c^2 - 4km = 0)");
}

#[test]
fn underdamped_symmetries_json() {
    let o = dho(&["symmetries", "-m", "1", "-c", "1", "-k", "1", "--lagrangian", "bateman", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let g = v["generators"].as_array().unwrap();
    assert_eq!(g.len(), 5);
    assert_eq!(g[1]["xi"], "sin(t*sqrt(3))");
    assert_eq!(g[4]["eta"], "exp(-(1/2)*t)*sin((1/2)*t*sqrt(3))");
}

#[test]
fn overdamped_audit_reports_table_and_discrepancies() {
    let o = dho(&["audit", "-m", "1", "-c", "3", "-k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("Table I mismatches: 0"));
    assert!(text.contains("[discrepancy] generator X3"));
}

#[test]
fn audit_json_layout() {
    let v = json(&dho(&["audit", "-m", "1", "-c", "2", "-k", "1", "--format", "json"]));
    for key in ["regime", "params", "generators", "integrals", "solution", "table", "audit"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["regime"], "Critical");
    assert_eq!(v["table"]["entries"].as_array().unwrap().len(), 20);
}

#[test]
fn verify_and_integrals_succeed_for_both_lagrangians() {
    for l in ["bateman", "new"] {
        for cmd in ["verify", "integrals", "brackets", "solve"] {
            let o = dho(&[cmd, "-m", "2", "-c", "1", "-k", "3", "--lagrangian", l, "--t-end", "2"]);
            assert_eq!(o.status.code(), Some(0), "{cmd} {l}: {}", String::from_utf8_lossy(&o.stdout));
        }
    }
}

#[test]
fn usage_error_exit_code() {
    let o = dho(&["solve", "-m", "abc"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn trajectory_csv_ends_at_t_end() {
    let tau = std::f64::consts::TAU.to_string();
    let o = dho(&["export-trajectory", "--ic", "0,1,0", "--t-end", &tau, "--h", "0.01", "-c", "0"]);
    let text = String::from_utf8_lossy(&o.stdout);
    let last = text.lines().last().unwrap();
    let f: Vec<f64> = last.split(',').map(|x| x.parse().unwrap()).collect();
    assert!((f[0] - std::f64::consts::TAU).abs() < 1e-12);
    assert!((f[1] - 1.0).abs() < 1e-8);
}
