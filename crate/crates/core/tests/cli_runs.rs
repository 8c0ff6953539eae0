use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use sbpp::cli::{parse_report, report_value, run_experiment, validate_config, ExperimentConfig, PHOTOGRAPHY_COLUMNS};
use sbpp::manifold::io::load_field;
use sbpp::ModelParams;

const MODEL: &str = "model.p = 4.25\nmodel.q = 0.25\nprofile.box = 8\nprofile.n = 32\n";

fn config(dir: &Path, body: &str) -> ExperimentConfig {
    let text = format!("{body}\n{MODEL}output.dir = {}\n", dir.display());
    validate_config(&text).unwrap()
}

fn report_pairs(dir: &Path) -> Vec<(String, String)> {
    parse_report(&fs::read_to_string(dir.join("report.txt")).unwrap())
}

fn value(pairs: &[(String, String)], key: &str) -> f64 {
    report_value(pairs, key)
        .unwrap_or_else(|| panic!("missing {key}"))
        .parse()
        .unwrap()
}

#[test]
fn constant_mode_with_critical_exponent() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = config(
        tmp.path(),
        "mode = constant\ntorus.L = 6.283185307179586\ntorus.N = 8\nmodel.eps = 1",
    );
    cfg.model = ModelParams::new(1.0, 6.0, 1.0, 2.0).unwrap();
    let rep = run_experiment(&cfg).unwrap();
    assert_eq!(rep.exit_code(), 0);
    let pairs = report_pairs(tmp.path());
    let c = value(&pairs, "summary.c_star");
    let exact = (2.0 * std::f64::consts::PI + (4.0 * std::f64::consts::PI.powi(2) + 1.0).sqrt()).sqrt();
    assert!((c - exact).abs() <= 1e-12);
    assert!((c - 3.5560).abs() < 5e-5);
    let formula = value(&pairs, "summary.energy_formula");
    let grid = value(&pairs, "summary.energy_grid");
    assert!((formula - grid).abs() <= 1e-10 * formula.abs());
    assert!(value(&pairs, "summary.grad_max_norm") <= 1e-10);
}

#[test]
fn photography_records_all_centers_with_equal_energies() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(
        tmp.path(),
        "mode = photography\ntorus.L = 1\ntorus.N = 24\nmodel.eps = 0.2\nparallel = 2",
    );
    let rep = run_experiment(&cfg).unwrap();
    let csv = fs::read_to_string(tmp.path().join("photography.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(PHOTOGRAPHY_COLUMNS));
    let energies: Vec<f64> = lines.map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(energies.len(), 8);
    let spread = energies.iter().cloned().fold(f64::MIN, f64::max) - energies.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread <= 1e-9 * energies[0], "{energies:?}");
    assert!(rep.m_eps_best.unwrap() <= energies[0] + 1e-12);
}

#[test]
fn sweep_table_and_monotonicity() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(
        tmp.path(),
        "mode = sweep\ntorus.L = 1\nmodel.eps = 0.25\nsweep.eps = 0.25, 0.2\nsweep.n = 20, 24\nsolver.tol = 1e-6",
    );
    let rep = run_experiment(&cfg).unwrap();
    let csv = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let pairs = report_pairs(tmp.path());
    assert_eq!(report_value(&pairs, "summary.m_eps_nonincreasing_in_eps"), Some("true"));
    assert!(rep.m_eps_best.is_some());
}

fn all_files(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = vec![];
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(all_files(&p));
        } else if p.file_name().unwrap() != "timing.csv" {
            out.push((p.clone(), fs::read(&p).unwrap()));
        }
    }
    out.sort();
    out
}

#[test]
fn ground_run_is_deterministic_and_self_consistent() {
    let tmp = tempfile::tempdir().unwrap();
    let body = "mode = ground\ntorus.L = 1\ntorus.N = 16\nmodel.eps = 0.25\nsolver.tol = 1e-6\nsearch.inits = one-bump@0.5,0.5,0.5; constant; random";
    let cfg = config(tmp.path(), body);
    let rep = run_experiment(&cfg).unwrap();
    let first = all_files(tmp.path());
    let par = config(tmp.path(), &format!("{body}\nparallel = 3"));
    run_experiment(&par).unwrap();
    let again = config(tmp.path(), body);
    run_experiment(&again).unwrap();
    assert_eq!(first, all_files(tmp.path()));

    assert!(!rep.referenced_paths().is_empty());
    for p in rep.referenced_paths() {
        assert!(p.exists(), "{}", p.display());
        if p.extension().is_some_and(|e| e == "fld") {
            load_field(&p).unwrap();
        }
    }
    let pairs = report_pairs(tmp.path());
    let echoed: String = pairs
        .iter()
        .filter_map(|(k, v)| k.strip_prefix("config.").map(|k| format!("{k} = {v}\n")))
        .collect();
    assert_eq!(validate_config(&echoed).unwrap(), cfg);
}

fn sbpp(cfg: &str, dir: &Path, extra: &[&str]) -> std::process::Output {
    let path = dir.join("run.cfg");
    fs::write(&path, format!("{cfg}\n{MODEL}")).unwrap();
    Command::new(env!("CARGO_BIN_EXE_sbpp"))
        .arg("--config")
        .arg(&path)
        .args(extra)
        .env("SBPP_OUT", dir.join("env-out"))
        .output()
        .unwrap()
}

#[test]
fn binary_exit_codes_and_output_root() {
    let tmp = tempfile::tempdir().unwrap();
    let base = "mode = constant\ntorus.L = 1\ntorus.N = 8\nmodel.eps = 0.5";

    let bad = sbpp(base, tmp.path(), &["--p", "7"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("(4,6)"));

    let ok = sbpp(base, tmp.path(), &[]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(tmp.path().join("env-out/report.txt").exists());

    let out = tmp.path().join("flagged");
    let cone = "mode = cone\ntorus.L = 1\ntorus.N = 24\nmodel.eps = 0.2\ncone.points = 1\ncone.theta_samples = 3\ncone.max_iter = 60";
    let flagged = sbpp(cone, tmp.path(), &["--out", out.to_str().unwrap()]);
    let pairs = report_pairs(&out);
    let code = flagged.status.code().unwrap();
    assert_eq!(code == 2, report_value(&pairs, "status") == Some("partial"));
    assert_eq!(code, 2, "{}", String::from_utf8_lossy(&flagged.stderr));
}
