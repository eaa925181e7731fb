//! Run configuration: a TOML document whose unknown keys are hard errors.
//!
//! Every section is optional and defaults to the settings used by the acceptance suite;
//! the verdict thresholds in `[tolerances]` default to the acceptance criteria.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chern_numeric::{SphereQuadrature, TorusGrid};
use crate::crossed_symbol::ShiftMap;
use crate::error::{Error, Result};
use crate::lambda_ring::check_cutoff;
use crate::torus_model::{AnalyticOptions, BoxTier, TestMapSpec, Which};

/// The subcommands of the run orchestrator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Exact λ-ring checks of the operation ψ.
    Psi,
    /// The three index estimators, the invertibility surrogate and the symbol-level checks.
    Index,
    /// Convergence tables in the window radius and the grid resolution.
    Sweep,
    /// Ellipticity certificates of the example symbols (and optional operator export).
    Certify,
}

impl Command {
    /// Lower-case name as used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Command::Psi => "psi",
            Command::Index => "index",
            Command::Sweep => "sweep",
            Command::Certify => "certify",
        }
    }
}

/// A quadrature rule on `S²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SphereRule {
    /// Lebedev rule with 6, 14 or 26 nodes.
    Lebedev { nodes: usize },
    /// Gauss–Legendre × trapezoid product rule exact through the given degree.
    Gauss { degree: usize },
    /// Random nodes with equal weights, drawn from the run seed.
    Random { count: usize },
}

impl SphereRule {
    /// Builds the quadrature; `seed` is used by random rules only.
    pub fn build(&self, seed: u64) -> Result<SphereQuadrature> {
        match self {
            SphereRule::Lebedev { nodes } => SphereQuadrature::lebedev(*nodes),
            SphereRule::Gauss { degree } => SphereQuadrature::gauss_product(*degree),
            SphereRule::Random { count } => SphereQuadrature::random(*count, seed),
        }
    }
}

/// The operator under study: the test map `f` and the integer torus automorphism.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    /// The test map `f : T³ → GL_N(ℂ)`.
    pub map: TestMapSpec,
    /// Matrix `A` of the shift `x ↦ Ax` (default: the cat map).
    pub shift: ShiftMap,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            map: TestMapSpec::LatticeDirac { degree: 1 },
            shift: ShiftMap::cat(),
        }
    }
}

/// Settings of the `psi` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsiConfig {
    /// Number of series coefficients compared with the closed form.
    pub series_terms: usize,
    /// Degree cutoff of the `ch ψ = Td` and multiplicativity checks.
    pub d_max: usize,
    /// Dimension bounds for which ψ is expanded in exterior powers.
    pub exterior_dims: Vec<usize>,
    /// Degree through which the Newton conversion is round-tripped.
    pub newton_degree: usize,
    /// JSON file with expected exterior expansions (`{"5": [terms…]}`); the built-in closed
    /// forms for dimensions 3 and 5 are used when absent.
    pub expected_fixture: Option<PathBuf>,
}

impl Default for PsiConfig {
    fn default() -> Self {
        Self {
            series_terms: 50,
            d_max: 8,
            exterior_dims: vec![3, 5],
            newton_degree: 10,
            expected_fixture: None,
        }
    }
}

/// Settings of the `nice_index` evaluations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NiceConfig {
    /// Torus grid resolution.
    pub torus_resolution: usize,
    /// Sphere rule.
    pub sphere: SphereRule,
}

impl Default for NiceConfig {
    fn default() -> Self {
        Self {
            torus_resolution: 12,
            sphere: SphereRule::Gauss { degree: 20 },
        }
    }
}

/// Settings of the `index` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IndexConfig {
    /// Window radii of the analytic sweep (strictly increasing).
    pub radii: Vec<usize>,
    /// Trace power `m`.
    pub power: usize,
    /// Periodic box sides of the analytic evaluation, by mode radius.
    pub box_tiers: Vec<BoxTier>,
    /// Decay exponent used by the extrapolation.
    pub richardson_exponent: f64,
    /// Outer-shell contribution above which the window is flagged as too small.
    pub tail_threshold: f64,
    /// Torus grid resolutions of the topological and oracle sweep; the last is the main one.
    pub resolutions: Vec<usize>,
    /// Number of random sphere samples of the `D₁` margin.
    pub d1_samples: usize,
    /// Window radii of the `D₁` probe; stability is measured between the first and last.
    pub probe_radii: Vec<usize>,
    /// Settings of the cosphere-bundle integrals.
    pub nice: NiceConfig,
    /// Also evaluate the cosphere-bundle integrals (the most expensive stage).
    pub run_nice: bool,
}

impl Default for IndexConfig {
    fn default() -> Self {
        let analytic = AnalyticOptions::default();
        Self {
            radii: analytic.radii,
            power: analytic.power,
            box_tiers: analytic.box_tiers,
            richardson_exponent: analytic.richardson_exponent,
            tail_threshold: analytic.tail_threshold,
            resolutions: vec![16, 32],
            d1_samples: 10_000,
            probe_radii: vec![12, 18],
            nice: NiceConfig::default(),
            run_nice: true,
        }
    }
}

impl IndexConfig {
    /// The analytic-index options described by this section.
    pub fn analytic_options(&self) -> AnalyticOptions {
        AnalyticOptions {
            power: self.power,
            radii: self.radii.clone(),
            box_tiers: self.box_tiers.clone(),
            richardson_exponent: self.richardson_exponent,
            tail_threshold: self.tail_threshold,
        }
    }
}

/// Sparse-triplet export of assembled lattice operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportConfig {
    /// Window radius.
    pub radius: usize,
    /// Operators to export.
    pub operators: Vec<Which>,
}

/// Settings of the `certify` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifyConfig {
    /// Torus grid resolution of the product sample set.
    pub torus_resolution: usize,
    /// Sphere rule of the product sample set.
    pub sphere: SphereRule,
    /// Additional random phase-space samples drawn from the run seed.
    pub random_samples: usize,
    /// Optional operator export into `operators/` of the output directory.
    pub export: Option<ExportConfig>,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            torus_resolution: 16,
            sphere: SphereRule::Lebedev { nodes: 26 },
            random_samples: 0,
            export: None,
        }
    }
}

/// Settings of the `sweep` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Window radii of the analytic table.
    pub radii: Vec<usize>,
    /// Grid resolutions of the topological table.
    pub resolutions: Vec<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            radii: vec![8, 12, 16],
            resolutions: vec![8, 16, 24, 32],
        }
    }
}

/// Verdict thresholds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Gap of the analytic estimate to its nearest integer.
    pub analytic_gap: f64,
    /// Gap of the topological estimate to its nearest integer.
    pub topological_gap: f64,
    /// Gap of the degree oracle to its nearest integer.
    pub oracle_gap: f64,
    /// `|nice_index(σ) − topological|`.
    pub nice_agreement: f64,
    /// `|nice_index(σ₁)|`.
    pub nice_sigma1: f64,
    /// Residual of the ellipticity certificates.
    pub certificate_residual: f64,
    /// Relative change of the `D₁` probe between the first and last probe radius.
    pub probe_stability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            analytic_gap: 0.1,
            topological_gap: 1e-3,
            oracle_gap: 1e-3,
            nice_agreement: 1e-2,
            nice_sigma1: 1e-6,
            certificate_residual: 1e-10,
            probe_stability: 0.2,
        }
    }
}

/// A complete run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Seed of every random sample set.
    pub seed: u64,
    pub model: ModelConfig,
    pub psi: PsiConfig,
    pub index: IndexConfig,
    pub certify: CertifyConfig,
    pub sweep: SweepConfig,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            model: ModelConfig::default(),
            psi: PsiConfig::default(),
            index: IndexConfig::default(),
            certify: CertifyConfig::default(),
            sweep: SweepConfig::default(),
            tolerances: Tolerances::default(),
        }
    }
}

fn check_radii(name: &str, radii: &[usize]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::config(format!("{name} must not be empty")));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config(format!("{name} must be strictly increasing, got {radii:?}")));
    }
    Ok(())
}

fn check_resolutions(name: &str, resolutions: &[usize]) -> Result<()> {
    if resolutions.is_empty() {
        return Err(Error::config(format!("{name} must not be empty")));
    }
    for &m in resolutions {
        TorusGrid::new(m).map_err(|e| Error::config(format!("{name}: {e}")))?;
    }
    Ok(())
}

fn check_tolerance(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::config(format!("tolerances.{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

impl RunConfig {
    /// Parses a TOML document; errors carry the offending line and key.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    /// Reads and parses a TOML file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
    }

    /// Serializes to TOML.
    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(e.to_string()))
    }

    /// Checks every parameter the command will use against the module preconditions,
    /// before any computation starts.
    pub fn validate(&self, command: Command) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("analytic_gap", t.analytic_gap),
            ("topological_gap", t.topological_gap),
            ("oracle_gap", t.oracle_gap),
            ("nice_agreement", t.nice_agreement),
            ("nice_sigma1", t.nice_sigma1),
            ("certificate_residual", t.certificate_residual),
            ("probe_stability", t.probe_stability),
        ] {
            check_tolerance(name, v)?;
        }
        match command {
            Command::Psi => {
                let p = &self.psi;
                check_cutoff(p.d_max).map_err(|e| Error::config(format!("psi.d_max: {e}")))?;
                if p.newton_degree > 16 {
                    return Err(Error::config(format!(
                        "psi.newton_degree {} is beyond the supported range 0..=16",
                        p.newton_degree
                    )));
                }
                if p.exterior_dims.iter().any(|&d| d > 2 * 16 + 1) {
                    return Err(Error::config("psi.exterior_dims entries must be at most 33"));
                }
            }
            Command::Index => {
                let i = &self.index;
                check_radii("index.radii", &i.radii)?;
                check_resolutions("index.resolutions", &i.resolutions)?;
                if i.power < 4 {
                    return Err(Error::config(format!("index.power must be at least 4, got {}", i.power)));
                }
                if i.box_tiers.is_empty() || i.box_tiers.iter().any(|t| t.side < 4 || t.side % 2 != 0) {
                    return Err(Error::config("index.box_tiers must be nonempty with even sides ≥ 4"));
                }
                let bandwidth = self.model.map.multiplier()?.bandwidth().max(1);
                if i.radii[0] < i.power * bandwidth {
                    return Err(Error::config(format!(
                        "index.radii[0] = {} is below power·bandwidth = {}",
                        i.radii[0],
                        i.power * bandwidth
                    )));
                }
                if i.d1_samples == 0 {
                    return Err(Error::config("index.d1_samples must be positive"));
                }
                check_radii("index.probe_radii", &i.probe_radii)?;
                if i.probe_radii[0] < 4 {
                    return Err(Error::config("index.probe_radii entries must be at least 4"));
                }
                if i.run_nice {
                    TorusGrid::new(i.nice.torus_resolution)
                        .map_err(|e| Error::config(format!("index.nice.torus_resolution: {e}")))?;
                    i.nice.sphere.build(self.seed).map_err(|e| Error::config(format!("index.nice.sphere: {e}")))?;
                }
                TorusGrid::new(self.certify.torus_resolution)
                    .map_err(|e| Error::config(format!("certify.torus_resolution: {e}")))?;
                self.certify.sphere.build(self.seed).map_err(|e| Error::config(format!("certify.sphere: {e}")))?;
            }
            Command::Sweep => {
                check_radii("sweep.radii", &self.sweep.radii)?;
                check_resolutions("sweep.resolutions", &self.sweep.resolutions)?;
                let bandwidth = self.model.map.multiplier()?.bandwidth().max(1);
                if self.sweep.radii[0] < self.index.power * bandwidth {
                    return Err(Error::config(format!(
                        "sweep.radii[0] = {} is below power·bandwidth = {}",
                        self.sweep.radii[0],
                        self.index.power * bandwidth
                    )));
                }
            }
            Command::Certify => {
                TorusGrid::new(self.certify.torus_resolution)
                    .map_err(|e| Error::config(format!("certify.torus_resolution: {e}")))?;
                self.certify.sphere.build(self.seed).map_err(|e| Error::config(format!("certify.sphere: {e}")))?;
                if let Some(export) = &self.certify.export {
                    let bandwidth = self.model.map.multiplier()?.bandwidth();
                    if export.radius < bandwidth {
                        return Err(Error::config(format!(
                            "certify.export.radius {} is below the multiplier bandwidth {bandwidth}",
                            export.radius
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
