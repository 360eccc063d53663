use std::process::Command;

use eqtoda_cli::{emit_report, Format, Report, RunConfig};

fn eqtoda(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eqtoda"))
        .args(args)
        .env_remove("EQTODA_CONFIG")
        .output()
        .expect("run eqtoda");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn compute_examples() {
    let (code, out, _) = eqtoda(&["compute", "constraint", "2", "--format", "latex"]);
    assert_eq!(code, 0);
    assert!(out.contains("t \\mathsf{P}(v)") && out.contains("z_{1}"), "{out}");
    let (_, out, _) = eqtoda(&["compute", "hamiltonian", "0", "--format", "latex"]);
    assert_eq!(out.trim(), "\\int v \\, dx");
    let (_, out, _) = eqtoda(&["compute", "lax", "--power", "1", "--coeff", "0"]);
    assert_eq!(out.trim(), "D0[v]");
    let (code, _, err) = eqtoda(&["compute", "constraint", "9"]);
    assert_eq!(code, 3);
    assert!(err.contains("too small"), "{err}");
}

#[test]
fn skipped_check_keeps_exit_code_zero() {
    let (code, out, _) = eqtoda(&["verify", "--check", "bar-involution", "--lambda-depth", "1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("skipped"), "{out}");
}

#[test]
fn lemma_for_a_single_n() {
    let (code, out, _) = eqtoda(&["verify", "--check", "lemma-p0", "--n", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checks"][0]["status"], "pass");
    assert_eq!(v["checks"][0]["residual"], "");
    assert_eq!(v["checks"][0]["params"]["n"], serde_json::json!([1]));
}

#[test]
fn theorem_main_reports_the_relation() {
    let (code, out, _) =
        eqtoda(&["verify", "--check", "theorem-main", "--eps-order", "4", "--lambda-depth", "6", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["checks"][0]["params"]["relation"].as_str().unwrap().contains("nabla(v - vbar)"));
}

#[test]
fn config_sources_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.conf");
    std::fs::write(&path, "eps_order = 3\nlambda_depth = 4\nformat = json\nchecks = w-inverse\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_eqtoda"))
        .arg("verify")
        .env("EQTODA_CONFIG", &path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["eps_order"], 3);
    assert_eq!(v["checks"][0]["params"]["depth"], 4);

    let (code, _, err) = eqtoda(&["verify", "--check", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown check"));
    let (code, _, _) = eqtoda(&["verify", "--eps-order", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn fault_in_a3_is_located() {
    let (code, out, _) = eqtoda(&["verify", "--check", "theorem-main", "--eps-order", "4", "--lambda-depth", "6", "--inject-fault", "a3-sign"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL") && out.contains(" at L^") && out.contains("monomial"), "{out}");
}

#[test]
fn empty_report_echoes_config() {
    let config = RunConfig::default();
    let r = Report { version: "0".into(), seed: config.seed, config, checks: vec![] };
    let json = emit_report(&r, Format::Json);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["checks"], serde_json::json!([]));
    assert_eq!(v["config"]["lambda_depth"], 8);
    assert!(emit_report(&r, Format::Latex).contains("\\begin{tabular}"));
}
