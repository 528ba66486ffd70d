//! End-to-end tests of the `semiflow` binary: exit codes, CSV layout, and
//! report schema.

use std::path::Path;
use std::process::{Command, Output};

fn semiflow(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiflow"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const CONSTANT_CONFIG: &str = r#"{
    "grid": { "n": 64 },
    "law": { "kind": "polytropic", "kappa": 1.0, "gamma": 1.4 },
    "time": { "dt": 1e-3, "t_end": 0.02, "output_stride": 5 },
    "solver": "flux_form",
    "ic": { "name": "constant", "params": { "rho": 1.0, "u": 0.0 } }
}"#;

const ACOUSTIC_CONFIG: &str = r#"{
    "grid": { "n": 64 },
    "law": { "kind": "polytropic", "kappa": 1.0, "gamma": 1.4 },
    "time": { "dt": 1e-3, "t_end": 0.05, "output_stride": 10 },
    "solver": "flux_form",
    "ic": { "name": "acoustic" }
}"#;

#[test]
fn missing_config_names_the_path_and_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = semiflow(
        &["simulate", "--config", "does-not-exist.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("does-not-exist.json"), "stderr: {stderr}");
}

#[test]
fn unknown_config_key_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = CONSTANT_CONFIG.replace("\"solver\"", "\"viscosity\": 0.1, \"solver\"");
    let path = write_config(dir.path(), "bad.json", &bad);
    let out = semiflow(&["simulate", "--config", &path], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_writes_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "run.json", CONSTANT_CONFIG);
    let out = semiflow(&["simulate", "--config", &path, "--out", "result"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let fields = std::fs::read_to_string(dir.path().join("result/fields.csv")).unwrap();
    let mut lines = fields.lines();
    assert_eq!(lines.next(), Some("t,x,rho,u,m"));
    // 5 snapshots (steps 0,5,10,15,20) x 64 nodes
    assert_eq!(fields.lines().count(), 1 + 5 * 64);

    let diag = std::fs::read_to_string(dir.path().join("result/diagnostics.csv")).unwrap();
    assert_eq!(diag.lines().next(), Some("t,mass,momentum,energy"));
    assert_eq!(diag.lines().count(), 1 + 5);

    // constant state: every diagnostics row carries the same values
    let rows: Vec<Vec<f64>> = diag
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    for row in &rows {
        assert!((row[1] - rows[0][1]).abs() <= 1e-12);
        assert!((row[2] - rows[0][2]).abs() <= 1e-12);
        assert!((row[3] - rows[0][3]).abs() <= 1e-12);
    }
}

#[test]
fn simulate_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "run.json", ACOUSTIC_CONFIG);
    assert_eq!(
        semiflow(&["simulate", "--config", &path, "--out", "a"], dir.path())
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        semiflow(&["simulate", "--config", &path, "--out", "b"], dir.path())
            .status
            .code(),
        Some(0)
    );
    let a = std::fs::read(dir.path().join("a/fields.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/fields.csv")).unwrap();
    assert_eq!(a, b, "fields.csv differs between identical runs");
}

#[test]
fn mass_column_is_constant_to_twelve_digits_for_acoustic_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "run.json", ACOUSTIC_CONFIG);
    let out = semiflow(&["simulate", "--config", &path, "--out", "."], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let diag = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    let masses: Vec<f64> = diag
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    for m in &masses {
        assert!((m - masses[0]).abs() <= 1e-12 * masses[0].abs());
    }
}

#[test]
fn solver_override_changes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "run.json", ACOUSTIC_CONFIG);
    let out = semiflow(
        &["simulate", "--config", &path, "--solver", "euler_poincare", "--out", "ep"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let out = semiflow(
        &["simulate", "--config", &path, "--solver", "upwind", "--out", "x"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cfl_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let too_fast = ACOUSTIC_CONFIG.replace("\"dt\": 1e-3", "\"dt\": 0.5");
    let path = write_config(dir.path(), "run.json", &too_fast);
    let out = semiflow(&["simulate", "--config", &path], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("CFL"), "stderr: {stderr}");
}

#[test]
fn verify_json_report_is_schema_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = semiflow(
        &["verify", "--suite", "algebra", "--format", "json", "--seed", "7"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.ends_with('\n'));
    let v: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(keys, vec!["checks", "seed", "suite"]);
    assert_eq!(v["suite"], "algebra");
    assert_eq!(v["seed"], 7);
    for check in v["checks"].as_array().unwrap() {
        let mut ck: Vec<&str> = check.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        ck.sort_unstable();
        assert_eq!(ck, vec!["measured", "name", "op", "passed", "threshold"]);
    }
}

#[test]
fn verify_duality_emits_convergence_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = semiflow(
        &[
            "verify", "--suite", "duality", "--grids", "64,128,256", "--format", "json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    let table = v["table"].as_object().expect("table present");
    assert_eq!(table["h"].as_array().unwrap().len(), 3);
    assert_eq!(table["order"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_unknown_suite_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = semiflow(&["verify", "--suite", "bogus"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compare_identical_solvers_reports_zero_distance() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "run.json", ACOUSTIC_CONFIG);
    let out = semiflow(
        &["compare", "--config", &path, "--solvers", "flux_form,flux_form"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("t,solver_a,solver_b,linf_rho,l2_rho,linf_u,l2_u")
    );
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        for value in &cols[3..] {
            assert_eq!(value.parse::<f64>().unwrap(), 0.0);
        }
    }
}

#[test]
fn compare_flux_vs_lie_poisson_passes_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "run.json", ACOUSTIC_CONFIG);
    let out = semiflow(
        &[
            "compare", "--config", &path, "--solvers", "flux_form,lie_poisson,material",
            "--threshold", "5e-4",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"), "stdout: {stdout}");
}

#[test]
fn compare_rejects_single_solver() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "run.json", ACOUSTIC_CONFIG);
    let out = semiflow(
        &["compare", "--config", &path, "--solvers", "flux_form"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}
