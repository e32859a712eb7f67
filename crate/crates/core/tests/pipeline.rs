mod common;

use std::fs;
use std::path::Path;

use roughmass::pipeline::{check_config, emit_report, run_pipeline, summary, Branch, PipelineConfig, PipelineResult, RUN_HEADER};
use roughmass::Error;

use common::*;

const FLAT: &str = r#"
[scenario]
kind = "euclidean"
extent = 2.0
spacing = 0.125

[mollify]
eps = [0.5, 0.375, 0.25]
"#;

fn flat_config() -> PipelineConfig {
    PipelineConfig::from_toml(FLAT).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().skip(1).collect()
}

#[test]
fn flat_run_passes_with_zero_masses() {
    let result = run_pipeline(&flat_config()).unwrap();
    assert!(result.passed(), "{}", summary(&result));
    assert_eq!(result.exit_code(), 0);
    for br in &result.branches {
        let d = br.outcome.as_ref().unwrap();
        assert_eq!((d.v_min, d.v_max), (0.0, 0.0));
        assert!(d.adm_hat.abs() < 1e-10 && d.adm_g_eps.abs() < 1e-10);
    }
    assert!(summary(&result).ends_with("verdict: PASS\n"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = flat_config();
    emit_report(&run_pipeline(&cfg).unwrap(), a.path(), true).unwrap();
    emit_report(&run_pipeline(&cfg).unwrap(), b.path(), true).unwrap();
    for name in ["run.csv", "bounds.csv", "summary.txt", "plotdata/axis_0.csv", "plotdata/mass_0.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
}

#[test]
fn rows_follow_decreasing_eps() {
    let dir = tempfile::tempdir().unwrap();
    emit_report(&run_pipeline(&flat_config()).unwrap(), dir.path(), false).unwrap();
    let run = read(dir.path(), "run.csv");
    assert_eq!(run.lines().next().unwrap(), RUN_HEADER);
    let eps: Vec<f64> = data_rows(&run).iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(eps, vec![0.5, 0.375, 0.25]);
    assert!(!dir.path().join("plotdata").exists());
}

#[test]
fn single_scale_gives_one_row_per_csv() {
    let mut cfg = flat_config();
    cfg.mollify.eps = vec![0.25];
    let dir = tempfile::tempdir().unwrap();
    emit_report(&run_pipeline(&cfg).unwrap(), dir.path(), true).unwrap();
    assert_eq!(data_rows(&read(dir.path(), "run.csv")).len(), 1);
    let bounds = read(dir.path(), "bounds.csv");
    assert!(data_rows(&bounds).iter().all(|l| l.starts_with("0,")));
}

#[test]
fn empty_result_writes_headers_only() {
    let empty = PipelineResult {
        scenario: "euclidean".into(),
        truth_mass: Some(0.0),
        adm_g: None,
        branches: vec![],
        verdicts: vec![],
    };
    let dir = tempfile::tempdir().unwrap();
    emit_report(&empty, dir.path(), true).unwrap();
    assert_eq!(read(dir.path(), "run.csv").lines().count(), 1);
    assert_eq!(read(dir.path(), "bounds.csv").lines().count(), 1);
    assert!(read(dir.path(), "summary.txt").contains("no branches"));
}

#[test]
fn failed_branch_does_not_disturb_the_others() {
    let mut result = run_pipeline(&flat_config()).unwrap();
    let good = tempfile::tempdir().unwrap();
    emit_report(&result, good.path(), false).unwrap();
    result.branches.insert(
        1,
        Branch { eps: Some(0.4), outcome: Err("solver breakdown: p^T A p = -1,\nat iteration 3".into()), numerical_failure: true },
    );
    assert_eq!(result.exit_code(), 3);
    let mixed = tempfile::tempdir().unwrap();
    emit_report(&result, mixed.path(), false).unwrap();
    let before = read(good.path(), "run.csv");
    let after = read(mixed.path(), "run.csv");
    let (b, a) = (data_rows(&before), data_rows(&after));
    assert_eq!(a.len(), 4);
    let strip = |l: &str| l.splitn(2, ',').nth(1).unwrap().to_string();
    assert_eq!(strip(a[0]), strip(b[0]));
    assert_eq!(strip(a[2]), strip(b[1]));
    assert_eq!(strip(a[3]), strip(b[2]));
    let failed: Vec<&str> = a[1].split(',').collect();
    assert_eq!(failed.len(), RUN_HEADER.split(',').count());
    assert!(failed[3..failed.len() - 1].iter().all(|v| *v == "NaN"), "{}", a[1]);
}

#[test]
fn config_errors_are_reported_as_such() {
    let unknown = "[scenario]\nkind = \"euclidean\"\nspacing = 0.1\ncolour = 3\n";
    assert!(matches!(PipelineConfig::from_toml(unknown), Err(Error::Config(_))));
    let typo = "[scenario]\nkind = \"euclidean\"\n[mollify]\nesp = [0.5]\n";
    assert!(matches!(PipelineConfig::from_toml(typo), Err(Error::Config(_))));
    let mut cfg = flat_config();
    cfg.mollify.eps = vec![0.25, 0.5];
    assert!(matches!(check_config(&cfg), Err(Error::Config(_))));
    cfg.mollify.eps = vec![0.2];
    assert!(matches!(check_config(&cfg), Err(Error::Config(_))));
    cfg.mollify.eps = vec![1.0];
    assert!(matches!(check_config(&cfg), Err(Error::Config(_))));
}

#[test]
fn shipped_configs_validate() {
    for name in ["euclidean.toml", "schwarzschild.toml", "negative_pocket.toml", "rough_potential.toml", "rough_bump.toml"] {
        let cfg = load_config(name);
        check_config(&cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn schwarzschild_config_recovers_the_mass() {
    let result = run_pipeline(&load_config("schwarzschild.toml")).unwrap();
    assert!(result.passed(), "{}", summary(&result));
    assert!((result.adm_g.unwrap() - 1.0).abs() < 0.01);
}
