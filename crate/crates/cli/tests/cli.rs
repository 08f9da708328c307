use std::fs;
use std::process::{Command, Output};

fn qcav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcav"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(report: &str, key: &str) -> Option<f64> {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .and_then(|v| v.split_whitespace().next()?.parse().ok())
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn params_defaults() {
    let out = qcav(&["params"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let phi0 = value(&text, "phi0").unwrap();
    assert!((phi0 / 1.14e-5 - 1.0).abs() < 0.01);
    let t = value(&text, "storage_time").unwrap();
    assert!((t / 2.7e-6 - 1.0).abs() < 0.03);
}

#[test]
fn params_without_josephson_coupling() {
    let out = qcav(&["params", "--set", "E_J=0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(value(&text, "eta"), Some(0.0));
    assert!(text.contains("storage_time = unavailable"));
}

#[test]
fn unstable_cavity_is_a_config_error() {
    let out = qcav(&["params", "--set", "L=6mm", "--set", "R=2.55mm"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unstable resonator"));
}

#[test]
fn unknown_key_and_empty_axis_exit_two() {
    assert_eq!(qcav(&["params", "--set", "wavelength=1"]).status.code(), Some(2));
    assert_eq!(qcav(&["sweep", "--set", "sweep_phi_e="]).status.code(), Some(2));
    assert_eq!(qcav(&["storage", "--set", "n_points=1"]).status.code(), Some(2));
}

#[test]
fn truncation_exits_three() {
    let out = qcav(&[
        "decoherence",
        "--set",
        "scale=desk",
        "--set",
        "phi_e=pi/2",
        "--set",
        "cutoff=8",
        "--set",
        "alphas=2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_then_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# cavity\nL = 4mm\nE_J = 20ueV  # weaker junction\n").unwrap();
    let conf = conf.to_str().unwrap();
    let from_file = stdout(&qcav(&["params", "--config", conf]));
    let overridden = stdout(&qcav(&["params", "--config", conf, "--set", "E_J=34ueV"]));
    let defaults = stdout(&qcav(&["params"]));
    assert_ne!(value(&from_file, "mode_volume"), value(&defaults, "mode_volume"));
    assert_eq!(value(&from_file, "mode_volume"), value(&overridden, "mode_volume"));
    assert!(value(&overridden, "e_j").unwrap() > value(&from_file, "e_j").unwrap());
    assert_eq!(value(&overridden, "e_j"), value(&defaults, "e_j"));
}

#[test]
fn storage_csv() {
    let out = qcav(&["storage", "--set", "scale=desk"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["t", "P_analytic", "P_numeric", "abs_diff"]);
    assert_eq!(rows.len(), 2001);
    assert!((rows[1000][1] - 1.0).abs() < 1e-9);
    for r in &rows {
        assert!(r[1] >= 0.0 && r[1] <= 1.0 + 1e-9);
        assert!(r[2] >= 0.0 && r[2] <= 1.0 + 1e-9);
        assert!(r[3] <= 1e-4);
    }
}

#[test]
fn decoherence_csv_columns() {
    let out = qcav(&["decoherence", "--set", "scale=desk", "--set", "n_points=201"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header.len(), 9);
    assert_eq!(header[1], "D_analytic_a0");
    assert_eq!(header[8], "D_numeric_a3");
    assert!(rows[0][1..].iter().all(|d| (d - 1.0).abs() < 1e-12));
    // π/2 bias: every analytic column is the same curve
    for r in &rows {
        for c in [3, 5, 7] {
            assert!((r[c] - r[1]).abs() < 1e-12);
        }
    }
}

#[test]
fn squeezing_run_orders_amplitudes() {
    let out = qcav(&[
        "decoherence",
        "--set",
        "scale=desk",
        "--set",
        "phi_e=0",
        "--set",
        "numeric=false",
    ]);
    let (_, rows) = csv_rows(&stdout(&out));
    let min = |c: usize| rows.iter().map(|r| r[c]).fold(f64::INFINITY, f64::min);
    assert!(min(4) < min(2));
}

#[test]
fn sweep_is_byte_identical_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &str| {
        vec![
            "sweep".to_string(),
            "--set".into(),
            "scale=desk".into(),
            "--set".into(),
            "sweep_phi_e=0, pi/4, pi/2".into(),
            "--set".into(),
            "sweep_alpha=0,1".into(),
            "--set".into(),
            "n_points=301".into(),
            "--out".into(),
            p.to_string(),
        ]
    };
    for path in [&a, &b] {
        let args = args(path.to_str().unwrap());
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert!(qcav(&refs).status.success());
    }
    let first = fs::read(&a).unwrap();
    assert_eq!(first, fs::read(&b).unwrap());
    let (header, rows) = csv_rows(std::str::from_utf8(&first).unwrap());
    assert_eq!(header.last().unwrap(), "optimal");
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[1][1], 1.0);
}

#[test]
fn device_scale_sweep_optima() {
    let out = qcav(&["sweep", "--set", "sweep_phi_e=0, pi/2", "--set", "sweep_alpha=0"]);
    let (_, rows) = csv_rows(&stdout(&out));
    for r in &rows {
        assert!((r[2] - 1.0).abs() <= 1e-6);
        assert_eq!(r[5], 1.0);
    }
}
