//! End-to-end checks of the `ringflux` binary: flag surface, payload
//! schemas, and exit codes, run against the compiled executable.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringflux"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout should be JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process should exit normally")
}

#[test]
fn threshold_attractive_json() {
    let out = run(&["threshold", "--beta", "-2"]);
    let v = json(&out);
    assert!((v["e0"].as_f64().unwrap() - (-2.38209787789084)).abs() < 1e-10);
    assert_eq!(v["branch"], "attractive");
    assert!((v["rate"].as_f64().unwrap() - 1.54340463841821).abs() < 1e-10);
    assert!(v["discriminant_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["d"].as_f64().unwrap(), 1.0);
}

#[test]
fn threshold_free_lattice() {
    let out = run(&["threshold", "--beta", "0"]);
    let v = json(&out);
    assert_eq!(v["e0"].as_f64().unwrap(), 0.0);
    assert_eq!(v["branch"], "free");
}

#[test]
fn threshold_csv_is_header_plus_row() {
    let out = run(&["threshold", "--beta", "-2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "beta,d,e0,branch,rate,discriminant_residual");
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), 6);
    assert_eq!(fields[3], "attractive");
    assert!(fields[2].parse::<f64>().unwrap() < -2.0);
}

#[test]
fn threshold_missing_strength_is_usage_error() {
    let out = run(&["threshold"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--beta"), "stderr should name the flag: {err}");
}

#[test]
fn threshold_rejects_zero_spacing() {
    let out = run(&["threshold", "--beta", "-2", "--d", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn critical_single_strength() {
    let out = run(&["critical", "--beta", "-20"]);
    let v = json(&out);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let a = rows[0]["alpha_crit"].as_f64().unwrap();
    assert!(a > 0.49 && a < 0.5, "alpha_crit = {a}");
    assert!(rows[0]["c_crit"].as_f64().unwrap() < 0.0);
    assert!(rows[0].get("note").is_none());
}

#[test]
fn critical_range_rows_track_strength() {
    let out = run(&["critical", "--beta-range", "-3:-0.001:log", "--points", "10"]);
    let v = json(&out);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 10);
    // |beta| shrinks along the sweep, so the critical flux must shrink too
    let alphas: Vec<f64> = rows.iter().map(|r| r["alpha_crit"].as_f64().unwrap()).collect();
    for pair in alphas.windows(2) {
        assert!(pair[1] < pair[0], "critical flux should decrease: {alphas:?}");
    }
    let betas: Vec<f64> = rows.iter().map(|r| r["beta"].as_f64().unwrap()).collect();
    assert!((betas[0] - (-3.0)).abs() < 1e-12);
    assert!((betas[9] - (-0.001)).abs() < 1e-12);
}

#[test]
fn critical_zero_strength_flagged_not_fatal() {
    let out = run(&["critical", "--beta", "0"]);
    let v = json(&out);
    let row = &v.as_array().unwrap()[0];
    assert!(row["alpha_crit"].is_null());
    assert!(row["d1"].is_null());
    assert!(row["note"].as_str().unwrap().len() > 4);
    assert_eq!(row["e0"].as_f64().unwrap(), 0.0);
}

#[test]
fn critical_flag_group_is_exclusive() {
    let out = run(&["critical", "--beta", "-2", "--beta-range", "-3:-1:lin", "--points", "4"]);
    assert_eq!(code(&out), 2);
    let out = run(&["critical"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn critical_range_bad_spacing_word() {
    let out = run(&["critical", "--beta-range", "-3:-1:cubic", "--points", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn classify_small_flux_attractive() {
    let out = run(&["classify", "--alpha", "0.05", "--beta", "-2"]);
    let v = json(&out);
    assert_eq!(v["classification"], "infinite_accumulating");
    assert!(v["c"].as_f64().unwrap() < 0.25);
    assert!(v["alpha_crit"].as_f64().unwrap() > 0.05);
    assert!(v["growth"].as_array().unwrap().is_empty());
}

#[test]
fn classify_half_flux_repulsive() {
    let out = run(&["classify", "--alpha", "0.5", "--beta", "7"]);
    let v = json(&out);
    assert_eq!(v["classification"], "at_most_finite");
    // half flux in the l = 0 channel sits exactly on c = 0
    assert_eq!(v["c"].as_f64().unwrap(), 0.0);
    assert_eq!(v["four_ab"].as_f64().unwrap(), 0.0);
}

#[test]
fn classify_growth_table_when_radii_given() {
    let out = run(&["classify", "--alpha", "0.05", "--beta", "-2", "--r-max", "60,120"]);
    let v = json(&out);
    let growth = v["growth"].as_array().unwrap();
    assert_eq!(growth.len(), 2);
    assert_eq!(growth[0]["r_max"].as_f64().unwrap(), 60.0);
    assert_eq!(growth[1]["r_max"].as_f64().unwrap(), 120.0);
    for g in growth {
        // no zero this far in; phase parked just below -pi/2
        assert_eq!(g["zero_count"].as_u64().unwrap(), 0);
        let w = g["wound_phase"].as_f64().unwrap();
        assert!(w > -std::f64::consts::PI && w < 0.0, "wound {w}");
        let s = g["amp_log_slope"].as_f64().unwrap();
        assert!(s > 0.0 && s < 1.0, "envelope slope {s}");
    }
}

#[test]
fn classify_large_flux_points_at_mirror() {
    let out = run(&["classify", "--alpha", "0.6", "--beta", "-2"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("0.4"), "hint should name the mirrored flux: {err}");
}

#[test]
fn eigen_default_window_ladder() {
    let out = run(&["eigen", "--alpha", "0.3", "--beta", "-20"]);
    let v = json(&out);
    assert_eq!(v["count"].as_u64().unwrap(), 6);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let e0 = v["e0"].as_f64().unwrap();
    let depth = e0 - rows[0]["e"].as_f64().unwrap();
    assert!((depth - 0.6661966).abs() < 1e-5, "deepest state at depth {depth}");
    for r in rows {
        assert_eq!(r["method"], "shooting");
        assert!(r["residual"].as_f64().unwrap() <= 5e-10);
        assert!(r.get("fd_e").is_none());
    }
    let js: Vec<u64> = rows.iter().map(|r| r["j"].as_u64().unwrap()).collect();
    assert_eq!(js, [0, 1, 2, 3, 4, 5]);
}

#[test]
fn eigen_oracle_cross_check_agrees() {
    let out = run(&[
        "eigen", "--alpha", "0", "--beta", "-2", "--r-max", "120", "--oracle",
    ]);
    let v = json(&out);
    let oracle = &v["oracle"];
    assert_eq!(oracle["fd_count"].as_u64(), oracle["shooting_count"].as_u64());
    assert_eq!(oracle["agree"], true);
    assert_eq!(oracle["grid_n"].as_u64().unwrap(), 60000);
}

#[test]
fn eigen_half_flux_window_is_empty() {
    let out = run(&["eigen", "--alpha", "0.5", "--beta", "-2", "--r-max", "120"]);
    let v = json(&out);
    assert_eq!(v["count"].as_u64().unwrap(), 0);
    assert!(v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn eigen_csv_lists_ladder() {
    let out = run(&[
        "eigen", "--alpha", "0.3", "--beta", "-20", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "j,e,method,residual,fd_e,fd_diff");
    assert_eq!(lines.len(), 7);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[2], "shooting");
    assert!(first[1].parse::<f64>().unwrap() < -100.0);
}

#[test]
fn eigen_rejects_window_above_threshold() {
    let out = run(&[
        "eigen", "--alpha", "0.3", "--beta", "-20", "--e-window", "-1:10",
    ]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("window"), "stderr: {err}");
}

#[test]
fn eigen_rejects_degenerate_domain() {
    let out = run(&["eigen", "--alpha", "0.3", "--beta", "-2", "--r-min", "0"]);
    assert_eq!(code(&out), 2);
    let out = run(&["eigen", "--alpha", "0.3", "--beta", "-2", "--r-min", "70"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn output_flag_writes_file_and_keeps_stdout_quiet() {
    let path = std::env::temp_dir().join(format!("ringflux-cli-{}.json", std::process::id()));
    let out = run(&[
        "threshold", "--beta", "-2", "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["branch"], "attractive");
    std::fs::remove_file(&path).ok();
}
