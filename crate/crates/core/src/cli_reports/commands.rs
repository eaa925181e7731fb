//! The four commands: each runs module operations in a fixed order, records their results
//! and derives pass/fail verdicts from the recorded numbers only.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{Command, RunConfig};
use super::lock::OutputLock;
use super::report::{Recorder, RunReport, Table, Timings, Verdict, REPORT_FILE, SWEEP_DIR, TIMINGS_FILE};
use crate::chern_numeric::{
    degree_oracle, nice_index, topological_index_f, DegreeReport, Estimate, IndexReport, TopologicalReport,
    TorusGrid,
};
use crate::crossed_symbol::{check_elliptic, random_unit_vector, CrossedSymbol, SampleSet, ShiftMap};
use crate::error::{Error, Result};
use crate::lambda_ring::{
    chern_psi_minus_todd, newton_convert, newton_invert, psi_in_exterior, psi_in_gamma, psi_series, rat,
    verify_psi_multiplicative, LambdaExpr, NCoefficient, Partition, PowerSumPoly, RationalPolyInN, TermRecord,
};
use crate::torus_model::{
    analytic_index, assemble, d1_margin, example_symbols, invertibility_probe_d1, D1Probe, ExampleSymbols,
};

/// Command-line overrides and the output location of a run.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Output directory (created if missing, locked for the duration of the run).
    pub out_dir: PathBuf,
    /// Overrides the configuration seed.
    pub seed: Option<u64>,
    /// Size of the worker pool (default: rayon's choice).
    pub threads: Option<usize>,
}

/// What a finished run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub timings: Timings,
    /// Paths of every file written, report first.
    pub written: Vec<PathBuf>,
}

/// The in-memory result of a command: report, timings and CSV tables.
#[derive(Clone, Debug)]
pub struct Execution {
    pub report: RunReport,
    pub timings: Timings,
    pub tables: Vec<(String, Table)>,
    /// Files written while the command ran (operator exports).
    pub exported: Vec<PathBuf>,
}

/// Validates the configuration, locks the output directory, runs the command and writes
/// `report.json`, `timings.json` and `sweeps/*.csv`.
pub fn run(command: Command, mut config: RunConfig, options: &RunOptions) -> Result<RunOutcome> {
    if let Some(seed) = options.seed {
        config.seed = seed;
    }
    config.validate(command)?;
    let _lock = OutputLock::acquire(&options.out_dir)?;
    let execution = match options.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config(format!("cannot build a pool of {n} threads: {e}")))?;
            pool.install(|| execute(command, &config, Some(&options.out_dir)))?
        }
        None => execute(command, &config, Some(&options.out_dir))?,
    };
    let mut written = Vec::new();
    let report_path = options.out_dir.join(REPORT_FILE);
    std::fs::write(&report_path, execution.report.to_json()?).map_err(|e| Error::io(&report_path, e))?;
    written.push(report_path);
    let timings_path = options.out_dir.join(TIMINGS_FILE);
    let timings_json =
        serde_json::to_string_pretty(&execution.timings).map_err(|e| Error::Serialize(e.to_string()))?;
    std::fs::write(&timings_path, timings_json + "\n").map_err(|e| Error::io(&timings_path, e))?;
    written.push(timings_path);
    if !execution.tables.is_empty() {
        let dir = options.out_dir.join(SWEEP_DIR);
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for (name, table) in &execution.tables {
            let path = dir.join(format!("{name}.csv"));
            table.write(&path)?;
            written.push(path);
        }
    }
    written.extend(execution.exported);
    Ok(RunOutcome {
        report: execution.report,
        timings: execution.timings,
        written,
    })
}

/// Runs a command on a validated configuration without touching the file system, except
/// for the operator export of `certify`, which needs `out_dir`.
pub fn execute(command: Command, config: &RunConfig, out_dir: Option<&Path>) -> Result<Execution> {
    let mut rec = Recorder::new();
    let mut exported = Vec::new();
    match command {
        Command::Psi => cmd_psi(config, &mut rec)?,
        Command::Index => cmd_index(config, &mut rec)?,
        Command::Sweep => cmd_sweep(config, &mut rec)?,
        Command::Certify => exported = cmd_certify(config, out_dir, &mut rec)?,
    }
    let (report, timings, tables) = rec.finish(command, config.clone());
    Ok(Execution {
        report,
        timings,
        tables,
        exported,
    })
}

// ---------------------------------------------------------------------------------------
// psi

#[derive(Serialize)]
struct SeriesCheck {
    terms: usize,
    coefficients: Vec<String>,
    mismatches: Vec<usize>,
}

#[derive(Serialize)]
struct GammaExpansion {
    d_max: usize,
    expansion: String,
}

#[derive(Serialize)]
struct TermDiff {
    monomial: String,
    expected: Option<Vec<NCoefficient>>,
    computed: Option<Vec<NCoefficient>>,
}

#[derive(Serialize)]
struct ExteriorExpansion {
    dim: usize,
    expansion: String,
    terms: Vec<TermRecord>,
    expected: Option<Vec<TermRecord>>,
    diff: Vec<TermDiff>,
}

#[derive(Serialize)]
struct DefectCount {
    degree: usize,
    defects: usize,
}

/// The closed forms of ψ(E − n) in dimensions 3 and 5.
fn builtin_fixture() -> BTreeMap<usize, Vec<TermRecord>> {
    let e = LambdaExpr::exterior(1);
    let n = RationalPolyInN::n();
    let dim3 = LambdaExpr::one().add(&e.sub(&LambdaExpr::constant(n)).scale(&rat(1, 2)));
    let poly = |c: &[(i64, i64)]| RationalPolyInN::from_coeffs(c.iter().map(|&(a, b)| rat(a, b)).collect());
    let dim5 = LambdaExpr::constant(poly(&[(24, 24), (-19, 24), (3, 24)]))
        .add(&e.scale_poly(&poly(&[(13, 12), (-3, 12)])))
        .sub(&e.mul(&e).scale(&rat(1, 6)))
        .add(&LambdaExpr::exterior(2).scale(&rat(7, 12)));
    BTreeMap::from([(3, dim3.term_records()), (5, dim5.term_records())])
}

fn load_fixture(path: &Path) -> Result<BTreeMap<usize, Vec<TermRecord>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
}

fn diff_terms(expected: &[TermRecord], computed: &[TermRecord]) -> Vec<TermDiff> {
    let exp: BTreeMap<&str, &Vec<NCoefficient>> =
        expected.iter().map(|t| (t.monomial.as_str(), &t.n_polynomial)).collect();
    let got: BTreeMap<&str, &Vec<NCoefficient>> =
        computed.iter().map(|t| (t.monomial.as_str(), &t.n_polynomial)).collect();
    let mut names: Vec<&str> = exp.keys().chain(got.keys()).copied().collect();
    names.sort_unstable();
    names.dedup();
    names
        .into_iter()
        .filter(|m| exp.get(m) != got.get(m))
        .map(|m| TermDiff {
            monomial: m.to_string(),
            expected: exp.get(m).map(|v| (*v).clone()),
            computed: got.get(m).map(|v| (*v).clone()),
        })
        .collect()
}

fn cmd_psi(config: &RunConfig, rec: &mut Recorder) -> Result<()> {
    let p = &config.psi;
    let series = rec.stage("psi_series", || {
        let s = psi_series(p.series_terms);
        let mismatches = (1..=p.series_terms)
            .filter(|&k| {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                s.coeff(k) != rat(sign, (k * (k + 1)) as i64)
            })
            .collect();
        Ok(SeriesCheck {
            terms: p.series_terms,
            coefficients: (0..=p.series_terms).map(|k| s.coeff(k).to_string()).collect(),
            mismatches,
        })
    })?;
    rec.verdict(Verdict::exact("psi_series_closed_form", series.mismatches.len()));

    rec.stage("psi_in_gamma", || {
        Ok(GammaExpansion {
            d_max: p.d_max,
            expansion: psi_in_gamma(p.d_max).to_string(),
        })
    })?;

    let fixture = match &p.expected_fixture {
        Some(path) => load_fixture(path)?,
        None => builtin_fixture(),
    };
    let expansions = rec.stage("psi_in_exterior", || {
        Ok(p.exterior_dims
            .iter()
            .map(|&dim| {
                let psi = psi_in_exterior(dim);
                let terms = psi.term_records();
                let expected = fixture.get(&dim).cloned();
                let diff = expected.as_deref().map(|e| diff_terms(e, &terms)).unwrap_or_default();
                ExteriorExpansion {
                    dim,
                    expansion: psi.to_string(),
                    terms,
                    expected,
                    diff,
                }
            })
            .collect::<Vec<_>>())
    })?;
    for e in &expansions {
        if e.expected.is_some() {
            rec.verdict(Verdict::exact(format!("psi_in_exterior_dim{}", e.dim), e.diff.len()));
        }
    }

    let mult = rec.stage("multiplicativity", || Ok(verify_psi_multiplicative(p.d_max)))?;
    rec.verdict(Verdict::exact("psi_multiplicative", mult.multiplicative_defects));
    rec.verdict(Verdict::exact("psi_stable", mult.stability_defects));

    let todd = rec.stage("chern_psi_equals_todd", || {
        Ok(DefectCount {
            degree: p.d_max,
            defects: chern_psi_minus_todd(p.d_max).terms().len(),
        })
    })?;
    rec.verdict(Verdict::exact("chern_psi_equals_todd", todd.defects));

    let newton = rec.stage("newton_roundtrip", || {
        let d = p.newton_degree;
        let mut defects = 0;
        for k in 1..=d {
            for m in Partition::all_of(k) {
                let pm = PowerSumPoly::monomial(m, RationalPolyInN::one(), d);
                if newton_invert(&newton_convert(&pm)) != pm {
                    defects += 1;
                }
            }
        }
        Ok(DefectCount { degree: d, defects })
    })?;
    rec.verdict(Verdict::exact("newton_roundtrip", newton.defects));
    Ok(())
}

// ---------------------------------------------------------------------------------------
// index

#[derive(Serialize)]
struct ProbeSweep {
    probes: Vec<D1Probe>,
    relative_change: f64,
}

#[derive(Serialize)]
struct EstimatorSummary {
    analytic: Estimate,
    topological: Estimate,
    oracle: Option<Estimate>,
    expected_degree: i32,
    disagreements: usize,
}

fn example(config: &RunConfig) -> Result<ExampleSymbols> {
    example_symbols(config.model.map.field()?, Arc::new(config.model.shift.clone()))
}

fn sphere_samples(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_unit_vector(&mut rng)).collect()
}

fn certificate_samples(config: &RunConfig) -> Result<SampleSet> {
    let c = &config.certify;
    let grid = TorusGrid::new(c.torus_resolution)?;
    let sphere = c.sphere.build(config.seed)?;
    let label = format!("{}^3 x {}", c.torus_resolution, sphere.label());
    let mut points = SampleSet::product(&grid.nodes(), sphere.nodes(), label.clone())?
        .points()
        .to_vec();
    let mut label = label;
    if c.random_samples > 0 {
        points.extend_from_slice(SampleSet::random(c.random_samples, config.seed).points());
        label = format!("{label} + random({}, seed {})", c.random_samples, config.seed);
    }
    Ok(SampleSet::from_points(points, label))
}

fn topological_sweep(config: &RunConfig, resolutions: &[usize], rec: &mut Recorder) -> Result<(Vec<TopologicalReport>, Option<Vec<DegreeReport>>)> {
    let field = config.model.map.field()?;
    let top = rec.stage("topological", || {
        resolutions
            .iter()
            .map(|&m| topological_index_f(field.as_ref(), &TorusGrid::new(m)?))
            .collect::<Result<Vec<_>>>()
    })?;
    let oracle = match config.model.map.su2_field()? {
        Some(su2) => Some(rec.stage("degree_oracle", || {
            resolutions
                .iter()
                .map(|&m| degree_oracle(su2.as_ref(), &TorusGrid::new(m)?))
                .collect::<Result<Vec<_>>>()
        })?),
        None => None,
    };
    Ok((top, oracle))
}

fn cmd_index(config: &RunConfig, rec: &mut Recorder) -> Result<()> {
    let idx = &config.index;
    let tol = &config.tolerances;
    let shift: &ShiftMap = &config.model.shift;

    let margin = rec.stage("d1_margin", || d1_margin(shift, &sphere_samples(idx.d1_samples, config.seed)))?;
    rec.verdict(Verdict::above("d1_angle_margin", margin.angle_margin, 0.0));
    rec.verdict(Verdict::above("d1_min_singular_value", margin.min_singular_value, 0.0));

    let probe = rec.stage("d1_probe", || {
        let probes = idx
            .probe_radii
            .iter()
            .map(|&r| invertibility_probe_d1(r, shift))
            .collect::<Result<Vec<_>>>()?;
        let first = probes[0].smallest_singular_value;
        let last = probes[probes.len() - 1].smallest_singular_value;
        Ok(ProbeSweep {
            relative_change: (last - first).abs() / first,
            probes,
        })
    })?;
    rec.verdict(Verdict::above(
        "d1_probe_positive",
        probe.probes.iter().map(|p| p.smallest_singular_value).fold(f64::INFINITY, f64::min),
        0.0,
    ));
    rec.verdict(Verdict::below("d1_probe_stability", probe.relative_change, tol.probe_stability));

    let ex = example(config)?;
    let cert = rec.stage("ellipticity", || {
        check_elliptic(&ex.sigma_d, &ex.sigma_b, &ex.shift, &certificate_samples(config)?)
    })?;
    rec.verdict(Verdict::below("ellipticity_residual", cert.residual, tol.certificate_residual));

    let multiplier = config.model.map.multiplier()?;
    let analytic = rec.stage("analytic", || analytic_index(&multiplier, &idx.analytic_options()))?;
    let (top, oracle) = topological_sweep(config, &idx.resolutions, rec)?;
    let top_main = top.last().expect("validated nonempty");
    let oracle_main = oracle.as_ref().and_then(|o| o.last());

    rec.stage("index_report", || {
        Ok(IndexReport::new(
            analytic.value,
            top_main.estimate.value,
            idx.radii.clone(),
            idx.power,
            top_main.resolution,
        ))
    })?;

    let analytic_est = Estimate::new(analytic.value);
    let expected = config.model.map.expected_degree();
    let estimates: Vec<Estimate> = [Some(analytic_est), Some(top_main.estimate), oracle_main.map(|o| o.estimate)]
        .into_iter()
        .flatten()
        .collect();
    let summary = rec.stage("estimators", || {
        Ok(EstimatorSummary {
            analytic: analytic_est,
            topological: top_main.estimate,
            oracle: oracle_main.map(|o| o.estimate),
            expected_degree: expected,
            disagreements: estimates
                .iter()
                .filter(|e| e.nearest_integer != estimates[0].nearest_integer)
                .count(),
        })
    })?;
    rec.verdict(Verdict::below("analytic_gap", analytic.gap, tol.analytic_gap));
    rec.verdict(Verdict::below("topological_gap", top_main.estimate.gap, tol.topological_gap));
    if let Some(o) = oracle_main {
        rec.verdict(Verdict::below("oracle_gap", o.estimate.gap, tol.oracle_gap));
    }
    rec.verdict(Verdict::exact("estimators_agree", summary.disagreements));
    rec.verdict(Verdict::exact(
        "matches_expected_degree",
        estimates.iter().filter(|e| e.nearest_integer != expected as i64).count(),
    ));

    if idx.run_nice {
        let torus = TorusGrid::new(idx.nice.torus_resolution)?;
        let sphere = idx.nice.sphere.build(config.seed)?;
        let nice = |s: &CrossedSymbol, inv: &CrossedSymbol| nice_index(s, Some(inv), &ex.shift, &torus, &sphere);
        let full = rec.stage("nice_sigma", || nice(&ex.sigma_d, &ex.sigma_b))?;
        let sigma1 = rec.stage("nice_sigma1", || nice(&ex.sigma1, &ex.sigma1_inv))?;
        rec.verdict(Verdict::below("nice_sigma1", sigma1.estimate.value.abs(), tol.nice_sigma1));
        rec.verdict(Verdict::below(
            "nice_sigma_vs_topological",
            (full.estimate.value - top_main.estimate.value).abs(),
            tol.nice_agreement,
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------
// sweep

fn cmd_sweep(config: &RunConfig, rec: &mut Recorder) -> Result<()> {
    let s = &config.sweep;
    let tol = &config.tolerances;
    let mut options = config.index.analytic_options();
    options.radii = s.radii.clone();
    let multiplier = config.model.map.multiplier()?;
    let analytic = rec.stage("analytic", || analytic_index(&multiplier, &options))?;
    let mut radius_table = Table::new(&["radius", "partial_sum", "imaginary", "gap"]);
    for p in &analytic.partial_sums {
        radius_table.push(vec![
            p.radius.to_string(),
            p.value.to_string(),
            p.imaginary.to_string(),
            Estimate::new(p.value).gap.to_string(),
        ]);
    }
    radius_table.push(vec![
        "extrapolated".into(),
        analytic.value.to_string(),
        analytic.imaginary.to_string(),
        analytic.gap.to_string(),
    ]);
    rec.tables.push(("analytic_radius".into(), radius_table));

    let (top, oracle) = topological_sweep(config, &s.resolutions, rec)?;
    let mut res_table = Table::new(&["resolution", "topological", "topological_gap", "oracle", "oracle_gap"]);
    for (i, t) in top.iter().enumerate() {
        let o = oracle.as_ref().map(|o| o[i].estimate);
        res_table.push(vec![
            t.resolution.to_string(),
            t.estimate.value.to_string(),
            t.estimate.gap.to_string(),
            o.map(|e| e.value.to_string()).unwrap_or_default(),
            o.map(|e| e.gap.to_string()).unwrap_or_default(),
        ]);
    }
    rec.tables.push(("topological_resolution".into(), res_table));

    rec.verdict(Verdict::below("analytic_gap", analytic.gap, tol.analytic_gap));
    let last = top.last().expect("validated nonempty");
    rec.verdict(Verdict::below("topological_gap", last.estimate.gap, tol.topological_gap));
    if let Some(o) = oracle.as_ref().and_then(|o| o.last()) {
        rec.verdict(Verdict::below("oracle_gap", o.estimate.gap, tol.oracle_gap));
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------
// certify

#[derive(Serialize)]
struct ExportRecord {
    operator: String,
    file: String,
    dim: usize,
    nnz: usize,
}

fn cmd_certify(config: &RunConfig, out_dir: Option<&Path>, rec: &mut Recorder) -> Result<Vec<PathBuf>> {
    let tol = config.tolerances.certificate_residual;
    let ex = example(config)?;
    let samples = certificate_samples(config)?;
    for (name, a, a_inv) in [
        ("sigma", &ex.sigma_d, &ex.sigma_b),
        ("sigma0", &ex.sigma0, &ex.sigma0_inv),
        ("sigma1", &ex.sigma1, &ex.sigma1_inv),
    ] {
        let cert = rec.stage(&format!("ellipticity_{name}"), || check_elliptic(a, a_inv, &ex.shift, &samples))?;
        rec.verdict(Verdict::below(format!("ellipticity_residual_{name}"), cert.residual, tol));
    }
    let mut exported = Vec::new();
    if let Some(export) = &config.certify.export {
        let dir = out_dir
            .ok_or_else(|| Error::precondition("operator export needs an output directory"))?
            .join("operators");
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let multiplier = config.model.map.multiplier()?;
        let records = rec.stage("export", || {
            export
                .operators
                .iter()
                .map(|&which| {
                    let op = assemble(&multiplier, export.radius, which, &config.model.shift)?;
                    let name = serde_json::to_value(which)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default();
                    let file = format!("{name}_r{}.txt", export.radius);
                    op.export_triplets(&dir.join(&file))?;
                    Ok(ExportRecord {
                        operator: name,
                        file: format!("operators/{file}"),
                        dim: op.dim(),
                        nnz: op.nnz(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        exported.extend(records.iter().map(|r| dir.join(r.file.trim_start_matches("operators/"))));
    }
    Ok(exported)
}
