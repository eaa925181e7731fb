//! Configuration, locking, reports and the `ncindex` binary.

use std::path::Path;
use std::process::Command as Process;

use ncindex::cli_reports::{
    execute, run, Command, OutputLock, RunConfig, RunOptions, RunReport, Verdict, LOCK_FILE, REPORT_FILE, SWEEP_DIR,
    TIMINGS_FILE,
};
use ncindex::Error;

/// Small settings for every command, so that the suite stays fast.
const SMALL: &str = r#"
seed = 99

[index]
radii = [4, 5]
box_tiers = [{ up_to = 2, side = 12 }, { up_to = 1000, side = 8 }]
resolutions = [8, 16]
d1_samples = 500
probe_radii = [6, 9]
run_nice = false

[certify]
torus_resolution = 8
sphere = { kind = "lebedev", nodes = 14 }

[sweep]
radii = [4, 5]
resolutions = [8, 12]
"#;

fn small() -> RunConfig {
    RunConfig::from_toml_str(SMALL).unwrap()
}

fn options(dir: &Path) -> RunOptions {
    RunOptions {
        out_dir: dir.to_path_buf(),
        ..Default::default()
    }
}

#[test]
fn unknown_keys_are_rejected_with_their_location() {
    for text in ["sed = 1", "[index]\nradius = [4]", "[certify]\nsphere = { kind = \"gauss\", nodes = 3 }", "[bogus]"] {
        match RunConfig::from_toml_str(text) {
            Err(Error::Config(msg)) => assert!(msg.contains("unknown"), "{msg}"),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
    assert!(RunConfig::from_toml_str("[model]\nmap = { kind = \"lattice_dirac\", degree = 2, mass = 1 }").is_err());
}

#[test]
fn defaults_match_the_acceptance_thresholds_and_round_trip() {
    let config = RunConfig::default();
    let t = &config.tolerances;
    assert_eq!((t.analytic_gap, t.topological_gap, t.oracle_gap), (0.1, 1e-3, 1e-3));
    assert_eq!((t.nice_agreement, t.nice_sigma1, t.certificate_residual, t.probe_stability), (1e-2, 1e-6, 1e-10, 0.2));
    assert_eq!(config.index.radii, vec![8, 12, 16]);
    assert_eq!(config.index.power, 4);
    assert_eq!(config.index.d1_samples, 10_000);
    assert_eq!(RunConfig::from_toml_str("").unwrap(), config);
    let text = config.to_toml_string().unwrap();
    assert_eq!(RunConfig::from_toml_str(&text).unwrap(), config);
    let s = small();
    assert_eq!(RunConfig::from_toml_str(&s.to_toml_string().unwrap()).unwrap(), s);
}

#[test]
fn invalid_parameters_fail_validation_before_any_work() {
    let mut c = small();
    c.sweep.radii.clear();
    assert!(matches!(c.validate(Command::Sweep), Err(Error::Config(_))));
    let mut c = small();
    c.index.radii = vec![5, 4];
    assert!(matches!(c.validate(Command::Index), Err(Error::Config(_))));
    let mut c = small();
    c.index.radii = vec![2];
    assert!(c.validate(Command::Index).is_err());
    let mut c = small();
    c.index.resolutions = vec![7];
    assert!(c.validate(Command::Index).is_err());
    let mut c = small();
    c.tolerances.analytic_gap = -1.0;
    assert!(c.validate(Command::Psi).is_err());
    let mut c = small();
    c.psi.d_max = 99;
    assert!(c.validate(Command::Psi).is_err());
    // A run with an invalid configuration writes nothing.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut c = small();
    c.sweep.resolutions.clear();
    assert!(run(Command::Sweep, c, &options(&out)).is_err());
    assert!(!out.exists());
}

#[test]
fn output_directory_lock_is_exclusive() {
    let dir = tempfile::tempdir().unwrap();
    let lock = OutputLock::acquire(dir.path()).unwrap();
    assert!(dir.path().join(LOCK_FILE).exists());
    assert!(matches!(OutputLock::acquire(dir.path()), Err(Error::Locked(_))));
    assert!(matches!(run(Command::Psi, small(), &options(dir.path())), Err(Error::Locked(_))));
    drop(lock);
    assert!(!dir.path().join(LOCK_FILE).exists());
    run(Command::Psi, small(), &options(dir.path())).unwrap();
    assert!(!dir.path().join(LOCK_FILE).exists());
}

#[test]
fn psi_passes_and_reports_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(Command::Psi, small(), &options(dir.path())).unwrap();
    assert!(outcome.report.passed);
    assert_eq!(outcome.report.verdicts.len(), 7);
    let text = std::fs::read_to_string(dir.path().join(REPORT_FILE)).unwrap();
    let parsed = RunReport::from_json(&text).unwrap();
    assert_eq!(parsed, outcome.report);
    assert!(parsed.verdicts.iter().all(|v| v.recheck() == v.passed));
    assert!(dir.path().join(TIMINGS_FILE).exists());
    let exterior = parsed.stage("psi_in_exterior").unwrap();
    assert_eq!(exterior[0]["dim"], 3);
    assert!(exterior[0]["terms"].as_array().unwrap().len() >= 2);
}

#[test]
fn corrupted_fixture_is_reported_as_a_difference() {
    let dir = tempfile::tempdir().unwrap();
    // Dimension 3 expects ψ = 1 + (E − n)/2; change the coefficient of E to 1/3.
    let fixture = serde_json::json!({
        "3": [
            { "monomial": "1", "n_polynomial": [
                { "power": 0, "numerator": "1", "denominator": "1" },
                { "power": 1, "numerator": "-1", "denominator": "2" }
            ] },
            { "monomial": "E", "n_polynomial": [{ "power": 0, "numerator": "1", "denominator": "3" }] }
        ]
    });
    let path = dir.path().join("fixture.json");
    std::fs::write(&path, fixture.to_string()).unwrap();
    let mut c = small();
    c.psi.expected_fixture = Some(path);
    let result = execute(Command::Psi, &c, None);
    let report = match result {
        Ok(e) => e.report,
        Err(e) => panic!("{e}"),
    };
    assert!(!report.passed);
    let v = report.verdict("psi_in_exterior_dim3").unwrap();
    assert!(!v.passed && v.measured >= 1.0);
    let diff = &report.stage("psi_in_exterior").unwrap()[0]["diff"];
    assert!(!diff.as_array().unwrap().is_empty());
}

#[test]
fn zero_cutoff_is_a_trivial_pass() {
    let mut c = small();
    c.psi.d_max = 0;
    c.psi.series_terms = 0;
    c.psi.newton_degree = 0;
    c.psi.exterior_dims.clear();
    let report = execute(Command::Psi, &c, None).unwrap().report;
    assert!(report.passed);
}

#[test]
fn identical_runs_write_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}"));
        let mut c = small();
        c.certify.random_samples = 200;
        run(Command::Certify, c, &RunOptions { out_dir: out.clone(), seed: Some(5), threads: Some(1) }).unwrap();
        bytes.push(std::fs::read(out.join(REPORT_FILE)).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    // A different seed changes the random samples and hence the report.
    let out = dir.path().join("other");
    let mut c = small();
    c.certify.random_samples = 200;
    run(Command::Certify, c, &RunOptions { out_dir: out.clone(), seed: Some(6), threads: None }).unwrap();
    assert_ne!(std::fs::read(out.join(REPORT_FILE)).unwrap(), bytes[0]);
}

#[test]
fn certify_exports_sparse_triplets() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = RunConfig::from_toml_str(&format!("{SMALL}\n[certify.export]\nradius = 2\noperators = [\"d\", \"d1\"]\n")).unwrap();
    c.certify.random_samples = 10;
    let outcome = run(Command::Certify, c, &options(dir.path())).unwrap();
    assert!(outcome.report.passed);
    let file = dir.path().join("operators").join("d_r2.txt");
    assert!(outcome.written.contains(&file));
    let text = std::fs::read_to_string(file).unwrap();
    let header: Vec<usize> = text.lines().next().unwrap()[2..].split(' ').map(|s| s.parse().unwrap()).collect();
    assert_eq!(header[0], 5 * 5 * 5 * 2 * 2);
    assert_eq!(text.lines().count(), header[2] + 1);
}

#[test]
fn index_runs_every_stage_on_small_settings() {
    let report = execute(Command::Index, &small(), None).unwrap().report;
    for stage in ["d1_margin", "d1_probe", "ellipticity", "analytic", "topological", "degree_oracle", "index_report", "estimators"] {
        assert!(report.stage(stage).is_some(), "missing stage {stage}");
    }
    let failed: Vec<&Verdict> = report.verdicts.iter().filter(|v| !v.passed).collect();
    // The 8/16 grids are far coarser than the defaults; only the topological gaps may fail.
    assert!(
        failed.iter().all(|v| v.name == "topological_gap" || v.name == "oracle_gap"),
        "{failed:?}"
    );
    assert_eq!(report.verdict("matches_expected_degree").unwrap().measured, 0.0);
}

#[test]
fn sweep_writes_convergence_tables() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(Command::Sweep, small(), &options(dir.path())).unwrap();
    let radius = std::fs::read_to_string(dir.path().join(SWEEP_DIR).join("analytic_radius.csv")).unwrap();
    assert!(radius.starts_with("radius,partial_sum,imaginary,gap"));
    assert_eq!(radius.lines().count(), 1 + 2 + 1);
    let res = std::fs::read_to_string(dir.path().join(SWEEP_DIR).join("topological_resolution.csv")).unwrap();
    assert_eq!(res.lines().count(), 1 + 2);
    assert_eq!(outcome.written.len(), 4);
}

fn binary(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_ncindex")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes_follow_the_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("small.toml");
    std::fs::write(&config, SMALL).unwrap();
    let out = dir.path().join("out");
    let (config_s, out_s) = (config.to_str().unwrap(), out.to_str().unwrap());

    let ok = binary(&["psi", "--config", config_s, "--out", out_s, "--threads", "1"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 7);

    let fixture = dir.path().join("fixture.json");
    std::fs::write(&fixture, r#"{"3": [{"monomial": "E", "n_polynomial": [{"power": 0, "numerator": "1", "denominator": "1"}]}]}"#).unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, format!("[psi]\nexpected_fixture = {:?}\n", fixture.to_str().unwrap())).unwrap();
    let failing = binary(&["psi", "--config", bad.to_str().unwrap(), "--out", out_s]);
    assert_eq!(failing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&failing.stderr).contains("differs"));

    let unknown = dir.path().join("unknown.toml");
    std::fs::write(&unknown, "[psi]\nd_maximum = 3\n").unwrap();
    let err = binary(&["psi", "--config", unknown.to_str().unwrap(), "--out", out_s]);
    assert_eq!(err.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&err.stderr).contains("d_maximum"));

    let _lock = OutputLock::acquire(&out).unwrap();
    let locked = binary(&["psi", "--config", config_s, "--out", out_s]);
    assert_eq!(locked.status.code(), Some(2));
}
