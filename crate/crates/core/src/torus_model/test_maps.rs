//! Test maps `T³ → GL_N(ℂ)` with known mapping degree.
//!
//! * [`LatticeDiracMap`] — `f = n₄ + i·s·(n₁c₁ + n₂c₂ + n₃c₃)` with
//!   `n = (sin x₁, sin x₂, sin x₃, μ − Σ cos x_j)`: a trigonometric polynomial of
//!   bandwidth one (so its Fourier table is exact) whose normalization `f/|n|` is a map
//!   into SU(2) of degree `−s` for `1 < μ < 3`, `2s` for `|μ| < 1` and 0 for `μ > 3`.
//! * [`CollapseMap`] — collapse of a ball onto `S³ ≅ SU(2)` with a `C∞` radial profile,
//!   wrapped `d` times; equal to `1` outside the ball.
//! * [`ScalarMap`] — a nonvanishing scalar function with winding in `x₁`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::dirac::pauli;
use super::multiplier::MultiplierF;
use crate::crossed_symbol::TorusField;
use crate::error::{Error, Result};
use crate::linalg::{c64, identity, CMat};

/// The lattice-Dirac family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeDiracMap {
    pub mass: f64,
    pub orientation: f64,
}

impl LatticeDiracMap {
    /// The member of the family with mapping degree `d ∈ {−2, …, 2}`.
    pub fn for_degree(d: i32) -> Result<Self> {
        let (mass, orientation) = match d {
            2 => (0.0, 1.0),
            1 => (2.0, -1.0),
            0 => (4.0, 1.0),
            -1 => (2.0, 1.0),
            -2 => (0.0, -1.0),
            _ => {
                return Err(Error::precondition(format!(
                    "lattice-Dirac test maps exist for degrees −2..=2, got {d}"
                )))
            }
        };
        Ok(Self { mass, orientation })
    }

    fn n(&self, x: &[f64; 3]) -> [f64; 4] {
        [
            x[0].sin(),
            x[1].sin(),
            x[2].sin(),
            self.mass - x[0].cos() - x[1].cos() - x[2].cos(),
        ]
    }

    /// Exact Fourier table (bandwidth 1, seven nonzero coefficients).
    pub fn multiplier(&self) -> MultiplierF {
        let mut coeffs = vec![([0, 0, 0], identity(2) * c64(self.mass, 0.0))];
        for j in 0..3 {
            let mut plus = [0i64; 3];
            plus[j] = 1;
            let minus = [-plus[0], -plus[1], -plus[2]];
            // cos x = (e^{ix} + e^{−ix})/2, i·sin x = (e^{ix} − e^{−ix})/2.
            let half_sigma = pauli(j) * c64(0.5 * self.orientation, 0.0);
            let half_id = identity(2) * c64(-0.5, 0.0);
            coeffs.push((plus, &half_id + &half_sigma));
            coeffs.push((minus, &half_id - &half_sigma));
        }
        MultiplierF::from_coefficients(2, coeffs).expect("2×2 coefficients")
    }

    /// The SU(2)-valued normalization `f/|n|`.
    pub fn normalized(&self) -> NormalizedDirac {
        NormalizedDirac(*self)
    }
}

fn quaternion_matrix(q: [f64; 4], orientation: f64) -> CMat {
    // q₄·1 + i·s·(q₁c₁ + q₂c₂ + q₃c₃)
    let mut m = identity(2) * c64(q[3], 0.0);
    for (j, qj) in q.iter().take(3).enumerate() {
        m += pauli(j) * c64(0.0, orientation * qj);
    }
    m
}

impl TorusField for LatticeDiracMap {
    fn rank(&self) -> usize {
        2
    }
    fn value(&self, x: &[f64; 3]) -> CMat {
        quaternion_matrix(self.n(x), self.orientation)
    }
    fn gradient(&self, x: &[f64; 3]) -> [CMat; 3] {
        std::array::from_fn(|j| {
            let mut dn = [0.0; 4];
            dn[j] = x[j].cos();
            dn[3] = x[j].sin();
            quaternion_matrix(dn, self.orientation)
        })
    }
}

/// `f/|n|` for a [`LatticeDiracMap`] `f`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedDirac(pub LatticeDiracMap);

impl TorusField for NormalizedDirac {
    fn rank(&self) -> usize {
        2
    }
    fn value(&self, x: &[f64; 3]) -> CMat {
        let n = self.0.n(x);
        let r = n.iter().map(|v| v * v).sum::<f64>().sqrt();
        quaternion_matrix(n.map(|v| v / r), self.0.orientation)
    }
}

/// `C∞` step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    fn phi(t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            (-1.0 / t).exp()
        }
    }
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        phi(t) / (phi(t) + phi(1.0 - t))
    }
}

/// Collapse of the ball `|x − c| < r` (periodically wrapped) onto SU(2), wrapped `d` times:
/// `f = cos(dπh) + i sin(dπh)·c(ŷ)` with `y = (x − c)/r`, `h = S(1 − |y|²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollapseMap {
    pub degree: i32,
    pub center: [f64; 3],
    pub radius: f64,
}

impl CollapseMap {
    /// Validates that the ball fits in a fundamental domain.
    pub fn new(degree: i32, center: [f64; 3], radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < PI) {
            return Err(Error::precondition(format!(
                "collapse radius must lie in (0, π), got {radius}"
            )));
        }
        Ok(Self {
            degree,
            center,
            radius,
        })
    }
}

impl TorusField for CollapseMap {
    fn rank(&self) -> usize {
        2
    }
    fn value(&self, x: &[f64; 3]) -> CMat {
        let y: [f64; 3] =
            std::array::from_fn(|j| ((x[j] - self.center[j] + PI).rem_euclid(TAU) - PI) / self.radius);
        let r2 = y.iter().map(|v| v * v).sum::<f64>();
        if r2 >= 1.0 {
            return identity(2);
        }
        let h = smooth_step(1.0 - r2);
        let angle = self.degree as f64 * PI * h;
        let r = r2.sqrt();
        let mut m = identity(2) * c64(angle.cos(), 0.0);
        if r > 0.0 {
            // Orientation chosen so that the quaternionic degree equals `degree`.
            for (j, yj) in y.iter().enumerate() {
                m += pauli(j) * c64(0.0, -angle.sin() * yj / r);
            }
        }
        m
    }
}

/// The scalar map `e^{ix₁} + ½e^{ix₂}` (`N = 1`): nonvanishing, winding once in `x₁`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ScalarMap;

impl ScalarMap {
    /// Exact Fourier table.
    pub fn multiplier(&self) -> MultiplierF {
        let one = CMat::from_element(1, 1, c64(1.0, 0.0));
        let half = CMat::from_element(1, 1, c64(0.5, 0.0));
        MultiplierF::from_coefficients(1, [([1, 0, 0], one), ([0, 1, 0], half)]).expect("1×1")
    }
}

impl TorusField for ScalarMap {
    fn rank(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64; 3]) -> CMat {
        CMat::from_element(1, 1, c64(x[0].cos() + 0.5 * x[1].cos(), x[0].sin() + 0.5 * x[1].sin()))
    }
}

/// Pointwise product `f(x)·g(x)`.
#[derive(Clone, Debug)]
pub struct ProductField(pub Arc<dyn TorusField>, pub Arc<dyn TorusField>);

impl TorusField for ProductField {
    fn rank(&self) -> usize {
        self.0.rank()
    }
    fn value(&self, x: &[f64; 3]) -> CMat {
        self.0.value(x) * self.1.value(x)
    }
    fn gradient(&self, x: &[f64; 3]) -> [CMat; 3] {
        let (a, b) = (self.0.value(x), self.1.value(x));
        let (da, db) = (self.0.gradient(x), self.1.gradient(x));
        std::array::from_fn(|j| &da[j] * &b + &a * &db[j])
    }
}

/// Declarative description of a test map, as read from a run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestMapSpec {
    /// Lattice-Dirac map of the given degree (`N = 2`).
    LatticeDirac { degree: i32 },
    /// Collapse map of the given degree and ball radius (`N = 2`).
    Collapse {
        degree: i32,
        #[serde(default = "default_width")]
        width: f64,
        #[serde(default = "default_center")]
        center: [f64; 3],
        #[serde(default = "default_collapse_bandwidth")]
        bandwidth: usize,
    },
    /// The identity matrix of rank `n`.
    Constant {
        #[serde(default = "default_rank")]
        n: usize,
    },
    /// The scalar map `e^{ix₁} + ½e^{ix₂}` (`N = 1`).
    Scalar,
}

fn default_width() -> f64 {
    2.0
}
fn default_center() -> [f64; 3] {
    [PI, PI, PI]
}
fn default_collapse_bandwidth() -> usize {
    8
}
fn default_rank() -> usize {
    2
}

impl TestMapSpec {
    /// Expected index (mapping degree; zero for scalar and constant maps).
    pub fn expected_degree(&self) -> i32 {
        match self {
            TestMapSpec::LatticeDirac { degree } | TestMapSpec::Collapse { degree, .. } => *degree,
            TestMapSpec::Constant { .. } | TestMapSpec::Scalar => 0,
        }
    }

    /// Coefficient rank `N`.
    pub fn rank(&self) -> usize {
        match self {
            TestMapSpec::Constant { n } => *n,
            TestMapSpec::Scalar => 1,
            _ => 2,
        }
    }

    /// The map as a field on the torus.
    pub fn field(&self) -> Result<Arc<dyn TorusField>> {
        Ok(match self {
            TestMapSpec::LatticeDirac { degree } => Arc::new(LatticeDiracMap::for_degree(*degree)?),
            TestMapSpec::Collapse {
                degree,
                width,
                center,
                ..
            } => Arc::new(CollapseMap::new(*degree, *center, *width)?),
            TestMapSpec::Constant { n } => Arc::new(MultiplierF::constant(identity(*n))),
            TestMapSpec::Scalar => Arc::new(ScalarMap),
        })
    }

    /// The SU(2)-valued representative used by the degree oracle, when `N = 2`.
    pub fn su2_field(&self) -> Result<Option<Arc<dyn TorusField>>> {
        Ok(match self {
            TestMapSpec::LatticeDirac { degree } => {
                Some(Arc::new(LatticeDiracMap::for_degree(*degree)?.normalized()))
            }
            TestMapSpec::Collapse { .. } => Some(self.field()?),
            TestMapSpec::Constant { n } if *n == 2 => Some(self.field()?),
            _ => None,
        })
    }

    /// The Fourier multiplier (exact where the map is a trigonometric polynomial).
    pub fn multiplier(&self) -> Result<MultiplierF> {
        Ok(match self {
            TestMapSpec::LatticeDirac { degree } => LatticeDiracMap::for_degree(*degree)?.multiplier(),
            TestMapSpec::Collapse { bandwidth, .. } => {
                MultiplierF::from_field(self.field()?.as_ref(), *bandwidth)?
            }
            TestMapSpec::Constant { n } => MultiplierF::constant(identity(*n)),
            TestMapSpec::Scalar => ScalarMap.multiplier(),
        })
    }

    /// Short label.
    pub fn label(&self) -> String {
        match self {
            TestMapSpec::LatticeDirac { degree } => format!("lattice_dirac(d={degree})"),
            TestMapSpec::Collapse { degree, width, .. } => format!("collapse(d={degree}, r={width})"),
            TestMapSpec::Constant { n } => format!("constant(N={n})"),
            TestMapSpec::Scalar => "scalar".into(),
        }
    }
}
