//! End-to-end tests of the `attractor` binary: exit codes, the worked
//! examples, and byte-level determinism of the run reports.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_attractor");

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("attractor-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

const UNIT_CHARGE: &str = r#"{"p0": "1",
  "P": [["0","0","0"],["0","0","0"],["0","0","0"]],
  "Q": [["1","0","0"],["0","1","0"],["0","0","1"]],
  "q0": "0"}"#;

#[test]
fn symmetric_unit_charge_gives_t_equals_i() {
    let charge = write_temp("unit.json", UNIT_CHARGE);
    let out = run(&[
        "solve-torus",
        "--charge",
        charge.to_str().unwrap(),
        "--branch",
        "symmetric",
    ]);
    let rep = report(&out);
    let sol = &rep["outputs"]["solutions"][0];
    assert_eq!(sol["branch"], "symmetric-siegel");
    for i in 0..3 {
        for j in 0..3 {
            let entry = &sol["A"][i][j];
            assert_eq!(entry["a"], "0");
            assert_eq!(entry["b"], if i == j { "1" } else { "0" });
            assert_eq!(entry["D"], 1);
        }
    }
    assert_eq!(rep["outputs"]["invariants"]["D"], "4");
    assert_eq!(rep["suspect"], false);
}

#[test]
fn negated_charge_exits_three() {
    let charge = write_temp(
        "neg.json",
        &UNIT_CHARGE.replace("\"1\",\"0\",\"0\"", "\"-1\",\"0\",\"0\"")
            .replace("\"0\",\"1\",\"0\"", "\"0\",\"-1\",\"0\"")
            .replace("\"0\",\"0\",\"1\"", "\"0\",\"0\",\"-1\"")
            .replace("{\"p0\": \"-1\"", "{\"p0\": \"1\""),
    );
    let out = run(&["solve-torus", "--charge", charge.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_input_exits_two() {
    let charge = write_temp("bad.json", "{ not json");
    let out = run(&["solve-torus", "--charge", charge.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn float_mode_reports_residuals() {
    let charge = write_temp("unit_f.json", UNIT_CHARGE);
    let out = run(&[
        "solve-torus",
        "--charge",
        charge.to_str().unwrap(),
        "--float",
    ]);
    let rep = report(&out);
    let residuals = rep["residuals"].as_array().unwrap();
    assert!(!residuals.is_empty());
    for per_solution in residuals {
        for r in per_solution.as_array().unwrap() {
            assert!(r.as_f64().unwrap().abs() < 1e-9);
        }
    }
    assert_eq!(rep["suspect"], false);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let charge = write_temp("unit_d.json", UNIT_CHARGE);
    let strip = |out: Output| {
        let mut rep = report(&out);
        rep.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&rep).unwrap()
    };
    let a = strip(run(&["solve-torus", "--charge", charge.to_str().unwrap()]));
    let b = strip(run(&["solve-torus", "--charge", charge.to_str().unwrap()]));
    assert_eq!(a, b);
}

#[test]
fn invert_picard9_reproduces_period() {
    let period = write_temp(
        "period.json",
        r#"{"R": [["1","0","0"],["0","1","0"],["0","0","1"]],
            "D": 4,
            "N": [["0","0","0"],["0","0","0"],["0","0","0"]]}"#,
    );
    let out = run(&["invert-picard9", "--period", period.to_str().unwrap()]);
    let rep = report(&out);
    assert_eq!(rep["outputs"]["period_reproduced"], true);
    assert_eq!(rep["suspect"], false);
}

#[test]
fn wp_elliptic_square_lattice() {
    let out = run(&["wp", "elliptic", "--tau", "0+1i"]);
    let rep = report(&out);
    let k = rep["outputs"]["potential"].as_f64().unwrap();
    assert!((k + 2f64.ln()).abs() < 1e-15);
}

#[test]
fn verify_rmd_suite_passes() {
    let out = run(&["verify", "--suite", "rmd", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn minimize_unit_charge_lands_on_i() {
    let charge = write_temp("unit_m.json", UNIT_CHARGE);
    let out = run(&[
        "minimize",
        "--charge",
        charge.to_str().unwrap(),
        "--seed",
        "0",
        "--starts",
        "8",
    ]);
    let rep = report(&out);
    let t = rep["outputs"]["minimum"]["T"].as_array().unwrap();
    for (i, row) in t.iter().enumerate() {
        for (j, entry) in row.as_array().unwrap().iter().enumerate() {
            let re = entry["re"].as_f64().unwrap();
            let im = entry["im"].as_f64().unwrap();
            let target = if i == j { 1.0 } else { 0.0 };
            assert!(re.abs() < 1e-6 && (im - target).abs() < 1e-6);
        }
    }
    assert_eq!(rep["suspect"], false);
}

#[test]
fn constellation_emits_csv() {
    let lattice = write_temp("lat.json", r#"{"gram": [[2,1],[1,2]]}"#);
    let out = run(&[
        "constellation",
        "--lattice",
        lattice.to_str().unwrap(),
        "--height",
        "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re_tau,im_tau,u1,u2,D"));
    assert!(lines.next().is_some());
}
