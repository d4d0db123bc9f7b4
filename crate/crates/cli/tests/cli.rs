//! Drives the `reflpos` binary: outputs, JSON schemas and exit codes.

use std::process::{Command, Output};

use reflpos::{MeasureOnR, VerificationReport};
use serde_json::Value;

fn reflpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reflpos")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", stdout(o)))
}

#[test]
fn disc_szego_at_origin_is_one_over_two_pi() {
    let o = reflpos(&["kernel", "--domain", "disc", "--kind", "szego", "--z", "0", "--w", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn strip_poisson_is_positive() {
    let o = reflpos(&["kernel", "--domain", "strip", "--beta", "1", "--kind", "poisson", "--z", "0.5i", "--x", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!(v > 0.0);
}

#[test]
fn kernel_json_output() {
    let o = reflpos(&["kernel", "--domain", "halfplane", "--kind", "power:2", "--z", "i", "--w", "i", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    // (i/(z − w̄))² at z = w = i is (1/2)².
    assert!((v["value"]["re"].as_f64().unwrap() - 0.25).abs() < 1e-15);
    assert_eq!(v["value"]["im"].as_f64().unwrap(), 0.0);
}

#[test]
fn strip_without_beta_is_a_usage_error() {
    let o = reflpos(&["kernel", "--domain", "strip", "--kind", "poisson", "--z", "0.5i", "--x", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--beta"));
}

#[test]
fn malformed_flags_exit_two() {
    assert_eq!(reflpos(&["kernel", "--domain", "torus", "--kind", "szego"]).status.code(), Some(2));
    assert_eq!(reflpos(&["kernel", "--domain", "disc", "--kind", "szego", "--z", "1+", "--w", "0"]).status.code(), Some(2));
    assert_eq!(reflpos(&["kernel", "--domain", "disc", "--kind", "cubic", "--z", "0", "--w", "0"]).status.code(), Some(2));
    assert_eq!(reflpos(&["verify", "--suite", "nothing"]).status.code(), Some(2));
    assert_eq!(reflpos(&["measure", "gamma", "--in", "{not json"]).status.code(), Some(2));
    assert_eq!(reflpos(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_three() {
    let o = reflpos(&["kernel", "--domain", "disc", "--kind", "szego", "--z", "2", "--w", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(reflpos(&["series", "csc", "--z", "2"]).status.code(), Some(3));
    assert_eq!(reflpos(&["rp", "check", "--group", "Z", "--lambda", "2"]).status.code(), Some(3));
}

#[test]
fn kernel_table_is_csv_with_header() {
    let o = reflpos(&["kernel", "--domain", "strip", "--beta", "1", "--kind", "szego", "--w", "0.5i", "--table", "-1:1:3,0.25:0.75:2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re_z,im_z,re_w,im_w,re_K,im_K"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.len() == 6 && r[2] == 0.0 && r[3] == 0.5));
    // Q(z, w) at z = w is real and positive.
    let diag = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.25).unwrap();
    assert!(diag[4] > 0.0);
}

#[test]
fn verify_appendix_passes_with_at_least_six_identities() {
    let o = reflpos(&["verify", "--suite", "appendix", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.results.len() >= 6);
    assert!(report.all_passed());
    for prefix in ["appendix.poisson_summation", "appendix.sech_ft", "appendix.sech2_ft", "appendix.sech_power_recursion", "appendix.ftcosh", "appendix.sinh_modulus"] {
        assert!(report.results.iter().any(|r| r.id.starts_with(prefix)), "missing {prefix}");
    }
}

#[test]
fn verify_all_json_schema_roundtrips() {
    let o = reflpos(&["verify", "--suite", "all", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, vec!["failed", "passed", "results", "suite"]);
    for r in v["results"].as_array().unwrap() {
        let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, vec!["anchor", "defect", "id", "pass", "tol"]);
    }
    let report: VerificationReport = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), v);
    let ids: Vec<&String> = report.results.iter().map(|r| &r.id).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(report.results.iter().all(|r| r.pass == (r.defect <= r.tol)));
}

#[test]
fn inject_defect_fails_the_run() {
    let o = reflpos(&["verify", "--suite", "appendix", "--json", "--inject-defect"]);
    assert_eq!(o.status.code(), Some(1));
    let report: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.failed, 1);
    assert!(report.results.iter().any(|r| !r.pass && r.tol == 0.0));
}

#[test]
fn capital_gamma_of_one_atom_has_two_atoms() {
    let o = reflpos(&["measure", "Gamma", "--beta", "1", "--in", r#"{"atoms":[[2,1]]}"#]);
    assert_eq!(o.status.code(), Some(0));
    let nu = MeasureOnR::from_json(stdout(&o).trim()).unwrap();
    let atoms = nu.atoms();
    assert_eq!(atoms.len(), 2);
    let e = (-2.0f64).exp();
    assert_eq!((atoms[0].location, atoms[1].location), (-2.0, 2.0));
    assert!((atoms[1].weight - 1.0 / (1.0 + e)).abs() < 1e-15);
    assert!((atoms[0].weight - e / (1.0 + e)).abs() < 1e-15);
}

#[test]
fn measure_from_file_and_kms_check() {
    let dir = std::env::temp_dir().join(format!("reflpos-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mu.json");
    std::fs::write(&path, r#"{"atoms":[[0.5,1.0],[3.0,2.0]]}"#).unwrap();
    let arg = format!("@{}", path.display());
    let g = reflpos(&["measure", "Gamma", "--beta", "2", "--in", &arg]);
    assert_eq!(g.status.code(), Some(0));
    let nu = stdout(&g);
    let o = reflpos(&["measure", "kms-check", "--beta", "2", "--in", nu.trim()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["kms"]["max_defect"].as_f64().unwrap() < 1e-8);
    assert!(v["reflection"]["max_relative_defect"].as_f64().unwrap() < 1e-12);
    let o = reflpos(&["measure", "fourier", "--in", &arg, "--z", "0"]);
    assert!((json(&o)["re"].as_f64().unwrap() - 3.0).abs() < 1e-15);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn rp_check_on_the_circle_passes() {
    let o = reflpos(&["rp", "check", "--group", "T", "--beta", "2", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["pd"]["verdict"], Value::Bool(true));
    assert_eq!(v["rp"]["verdict"], Value::Bool(true));
}

#[test]
fn sinh_series_reports_a_sound_tail_bound() {
    let o = reflpos(&["series", "sinh", "--beta", "1", "--z", "1", "--N", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let value = v["value"][0].as_f64().unwrap();
    let bound = v["tail_bound"].as_f64().unwrap();
    let exact = (std::f64::consts::PI / 2.0) / (std::f64::consts::PI / 2.0).sinh();
    assert!((value - exact).abs() <= bound);
    assert!(bound > 0.0 && bound < 1e-2);
}

#[test]
fn config_file_overrides_defaults() {
    let dir = std::env::temp_dir().join(format!("reflpos-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(&path, r#"{"terms": 10, "beta": 2.0}"#).unwrap();
    let cfg = path.to_str().unwrap();
    let o = reflpos(&["--config", cfg, "series", "sinh", "--z", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["terms_used"].as_u64().unwrap(), 21);
    std::fs::write(&path, r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(reflpos(&["--config", cfg, "series", "sinh", "--z", "1"]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn modular_commands() {
    let o = reflpos(&["modular", "psi", "--beta", "1", "--t", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    // ψ(0) = 1/(8β).
    assert!((v["closed_form"][0].as_f64().unwrap() - 0.125).abs() < 1e-15);
    assert!(v["defect"].as_f64().unwrap() < 1e-8);

    let sym = r#"{"atoms":[[-1.0,0.36787944117144233],[1.0,1.0]]}"#;
    let o = reflpos(&["modular", "check", "--beta", "1", "--measure", sym]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pass"], Value::Bool(true));
    let asym = r#"{"atoms":[[-1.0,1.0],[1.0,1.0]]}"#;
    assert_eq!(reflpos(&["modular", "check", "--beta", "1", "--measure", asym]).status.code(), Some(3));
}

#[test]
fn reflection_identity_flag() {
    let o = reflpos(&["kernel", "--domain", "disc", "--kind", "szego", "--reflection", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["defect"].as_f64().unwrap() < 1e-7);
}
