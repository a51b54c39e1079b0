use std::process::Command;

use casimir::cli::{run, EXIT_AUDIT, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
use casimir::sweep::CSV_HEADER;

fn casimir(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("casimir").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn single_row(stdout: &str) -> Vec<String> {
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2, "{stdout}");
    assert_eq!(lines[0], CSV_HEADER);
    lines[1].split(',').map(String::from).collect()
}

fn column(stdout: &str, name: &str) -> f64 {
    let idx = CSV_HEADER.split(',').position(|h| h == name).unwrap();
    single_row(stdout)[idx].parse().unwrap()
}

#[test]
fn ideal_metal_zero_temperature_point() {
    let (code, out, _) = casimir(&["pressure", "--model", "ideal", "--gap", "1e-6", "--temp", "0"]);
    assert_eq!(code, EXIT_OK);
    let p = column(&out, "pressure_Pa");
    assert_eq!(format!("{p:.3e}"), "-1.300e-3");
}

#[test]
fn vacuum_is_exactly_zero() {
    for cmd in ["pressure", "free-energy"] {
        let (code, out, _) = casimir(&[cmd, "--model", "vacuum", "--gap", "1e-6", "--temp", "300"]);
        assert_eq!(code, EXIT_OK);
        let row = single_row(&out);
        let v: f64 = row[if cmd == "pressure" { 2 } else { 4 }].parse().unwrap();
        assert_eq!(v, 0.0);
    }
}

#[test]
fn drude_gold_regression_value() {
    let (code, out, _) = casimir(&["pressure", "--gap", "1e-6", "--temp", "300"]);
    assert_eq!(code, EXIT_OK);
    let p = column(&out, "pressure_Pa");
    assert!(((p - -9.836_886_115_067_221e-4) / p).abs() < 1e-9, "{p}");
}

#[test]
fn explicit_gold_parameters_match_default() {
    let (_, a, _) = casimir(&["pressure", "--gap", "1e-6", "--temp", "300"]);
    let (_, b, _) = casimir(&[
        "pressure", "--model", "drude", "--wp-ev", "9.03", "--nu-ev", "0.0345", "--gap", "1e-6", "--temp", "300",
    ]);
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["pressure", "--temp", "300"],
        &["pressure", "--model", "copper", "--gap", "1e-6", "--temp", "300"],
        &["pressure", "--gap", "-1e-6", "--temp", "300"],
        &["pressure", "--gap", "1e-6", "--temp", "300", "--quad-tol", "0.5"],
        &["entropy", "--model", "ideal", "--gap", "1e-6", "--temp", "0"],
        &["sweep", "--axis", "gap", "--start", "2e-6", "--stop", "1e-6", "--points", "3", "--temp", "300"],
        &["sweep", "--axis", "gap", "--start", "1e-6", "--stop", "2e-6", "--points", "3"],
        &["audit"],
        &["audit", "nonsense"],
        &["frobnicate"],
    ];
    for args in cases {
        let (code, _, err) = casimir(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = casimir(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("sweep"));
    let (code, out, _) = casimir(&["--version"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("casimir "));
}

#[test]
fn truncated_sum_exits_two() {
    let (code, out, err) = casimir(&["pressure", "--model", "ideal", "--gap", "1e-6", "--temp", "1e-5"]);
    assert_eq!(code, EXIT_NUMERICAL, "{err}");
    assert!(single_row(&out)[9].contains("term cap"));
}

#[test]
fn audit_exit_codes() {
    let (code, out, _) = casimir(&["audit", "closed-forms", "classical"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS")));
    let (code, out, _) = casimir(&["audit", "fig3"]);
    assert_eq!(code, EXIT_AUDIT);
    assert!(out.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn audit_list_names_every_audit() {
    let (code, out, _) = casimir(&["audit", "--list"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), casimir::cli::AUDITS.len());
}

#[test]
fn audit_reports_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let (code, _, _) = casimir(&["audit", "closed-forms", "--report", json.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v[0]["name"], "entropy-closed-forms");
    assert_eq!(v[0]["entries"][0]["status"], "pass");
    let (code, _, _) = casimir(&["audit", "closed-forms", "--report", csv.to_str().unwrap(), "--report-format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("audit,check,"));
    assert_eq!(text.lines().count(), 19);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# point setup\nmodel = ideal\ngap = 2e-6\ntemp = 0\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let (code, out, err) = casimir(&["pressure", "--config", cfg]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(column(&out, "a_m"), 2e-6);
    let (code, out, _) = casimir(&["pressure", "--config", cfg, "--gap", "1e-6"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(format!("{:.3e}", column(&out, "pressure_Pa")), "-1.300e-3");
}

#[test]
fn minimal_sweep_has_header_and_two_rows() {
    let (code, out, _) = casimir(&["sweep", "--axis", "gap", "--start", "1e-6", "--stop", "2e-6", "--points", "2", "--temp", "300"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines[1].starts_with("9.9999999999999995e-7,3.0000000000000000e2,"));
    assert!(lines[2].starts_with("1.9999999999999999e-6,"));
}

const A4F_SWEEP: &[&str] = &[
    "sweep",
    "--model",
    "drude",
    "--axis",
    "gap",
    "--start",
    "1e-6",
    "--stop",
    "7e-6",
    "--points",
    "61",
    "--temp",
    "300",
    "--outputs",
    "pressure,a4f",
];

#[test]
fn a4f_gap_sweep_recipe() {
    let (code, out, _) = casimir(A4F_SWEEP);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').take(9).map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    assert_eq!(rows.len(), 61);
    let g: Vec<f64> = rows.iter().map(|r| r[8].abs()).collect();
    let min = g.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    let a_min = rows[min][0];
    assert!(a_min > 2.5e-6 && a_min < 4.5e-6, "{a_min}");
}

#[test]
fn sweep_output_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (i, threads) in ["1", "4", "4"].iter().enumerate() {
        let path = dir.path().join(format!("s{i}.csv"));
        let mut args = vec!["--threads", threads];
        args.extend_from_slice(A4F_SWEEP);
        args.extend_from_slice(&["--outputs", "pressure,free_energy,a4f", "--out", path.to_str().unwrap()]);
        let (code, out, _) = casimir(&args);
        assert_eq!(code, EXIT_OK);
        assert!(out.is_empty());
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[1], files[2]);
}

#[test]
fn entropy_temperature_sweep_recipe() {
    let (code, out, err) = casimir(&[
        "sweep",
        "--axis",
        "temperature",
        "--start",
        "2",
        "--stop",
        "300",
        "--points",
        "12",
        "--spacing",
        "log",
        "--gap",
        "1e-6",
        "--outputs",
        "entropy",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let s: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(6).unwrap().parse().unwrap()).collect();
    assert_eq!(s.len(), 12);
    // Gold at 1 um: negative entropy at low T, |S| shrinking towards T = 0.
    assert!(s[0] < 0.0 && s[0].abs() < s[3].abs());
}

#[test]
fn binary_exit_code_and_output() {
    let bin = env!("CARGO_BIN_EXE_casimir");
    let ok = Command::new(bin)
        .args(["pressure", "--model", "ideal", "--gap", "1e-6", "--temp", "0"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with(CSV_HEADER));
    let bad = Command::new(bin).args(["pressure", "--gap", "1e-6"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    let threads = Command::new(bin).env("CASIMIR_THREADS", "2").args(["audit", "closed-forms"]).output().unwrap();
    assert_eq!(threads.status.code(), Some(EXIT_OK));
}
