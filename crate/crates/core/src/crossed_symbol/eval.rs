//! Matrix-valued evaluators on `S*T³` with first-order jets.
//!
//! Symbols are stored as exact evaluators rather than grid samples: the fibre action of
//! `∂g` preserves no finite grid, so pullbacks must be evaluated exactly. Every node
//! propagates directional derivatives along arbitrary tangent vectors; analytic nodes do
//! it exactly, opaque closures fall back to central differences.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;

use super::phase::{PhasePoint, ShiftMap, Tangent};
use crate::linalg::{c64, identity, kron, CMat, C64};
use crate::torus_model::dirac::{clifford, spectral_projection_xi};

/// Value and directional derivatives of a matrix function at one point.
#[derive(Clone, Debug)]
pub struct Jet {
    pub value: CMat,
    /// `derivs[i]` is the derivative along the `i`-th requested tangent.
    pub derivs: Vec<CMat>,
}

/// A smooth matrix-valued function on the cosphere bundle.
pub trait PhaseFn: Send + Sync + fmt::Debug {
    /// Matrix size.
    fn size(&self) -> usize;

    /// Value at a point.
    fn eval(&self, z: &PhasePoint) -> CMat;

    /// Value and derivatives along the given tangents.
    fn jet(&self, z: &PhasePoint, tangents: &[Tangent]) -> Jet {
        finite_difference_jet(self, z, tangents)
    }
}

/// Shared handle to an evaluator.
pub type Evaluator = Arc<dyn PhaseFn>;

const FD_STEP: f64 = 1e-5;

/// Central-difference jet along the curve `t ↦ (x + t·dx, normalize(ξ + t·dξ))`.
pub fn finite_difference_jet<F: PhaseFn + ?Sized>(f: &F, z: &PhasePoint, tangents: &[Tangent]) -> Jet {
    let value = f.eval(z);
    let derivs = tangents
        .iter()
        .map(|t| {
            let at = |s: f64| {
                let xi = z.xi() + t.dxi * s;
                PhasePoint::from_parts(z.x() + t.dx * s, xi.normalize())
            };
            (f.eval(&at(FD_STEP)) - f.eval(&at(-FD_STEP))) / c64(2.0 * FD_STEP, 0.0)
        })
        .collect();
    Jet { value, derivs }
}

/// A smooth matrix function on the base torus with an analytic gradient.
pub trait TorusField: Send + Sync + fmt::Debug {
    /// Matrix size `N`.
    fn rank(&self) -> usize;

    /// Value at `x`.
    fn value(&self, x: &[f64; 3]) -> CMat;

    /// Partial derivatives `∂f/∂x_j`, `j = 1, 2, 3`.
    fn gradient(&self, x: &[f64; 3]) -> [CMat; 3] {
        let h = FD_STEP;
        let mut out: [CMat; 3] = Default::default();
        for (j, slot) in out.iter_mut().enumerate() {
            let mut xp = *x;
            let mut xm = *x;
            xp[j] += h;
            xm[j] -= h;
            *slot = (self.value(&xp) - self.value(&xm)) / c64(2.0 * h, 0.0);
        }
        out
    }
}

/// Constant matrix.
#[derive(Debug, Clone)]
pub struct Constant(pub CMat);

impl PhaseFn for Constant {
    fn size(&self) -> usize {
        self.0.nrows()
    }
    fn eval(&self, _: &PhasePoint) -> CMat {
        self.0.clone()
    }
    fn jet(&self, _: &PhasePoint, tangents: &[Tangent]) -> Jet {
        let n = self.size();
        Jet {
            value: self.0.clone(),
            derivs: vec![CMat::zeros(n, n); tangents.len()],
        }
    }
}

/// The positive spectral projection `p(ξ) = (1 + c(ξ))/2` of the Dirac symbol, acting on the
/// spinor factor of `ℂ² ⊗ ℂ^N` (identity on the coefficient factor).
#[derive(Debug, Clone)]
pub struct DiracProjection {
    pub coeff_rank: usize,
}

impl PhaseFn for DiracProjection {
    fn size(&self) -> usize {
        2 * self.coeff_rank
    }
    fn eval(&self, z: &PhasePoint) -> CMat {
        kron(&spectral_projection_xi(z.xi()), &identity(self.coeff_rank))
    }
    fn jet(&self, z: &PhasePoint, tangents: &[Tangent]) -> Jet {
        let id = identity(self.coeff_rank);
        Jet {
            value: kron(&spectral_projection_xi(z.xi()), &id),
            derivs: tangents
                .iter()
                .map(|t| kron(&(clifford(&t.dxi) * c64(0.5, 0.0)), &id))
                .collect(),
        }
    }
}

/// A base-torus field `f(x)` lifted to `1_{ℂ^k} ⊗ f(x)` (identity on a leading factor of size `k`).
#[derive(Debug, Clone)]
pub struct OnBase {
    pub field: Arc<dyn TorusField>,
    pub leading: usize,
}

impl OnBase {
    fn lift(&self, m: &CMat) -> CMat {
        if self.leading == 1 {
            m.clone()
        } else {
            kron(&identity(self.leading), m)
        }
    }
}

impl PhaseFn for OnBase {
    fn size(&self) -> usize {
        self.leading * self.field.rank()
    }
    fn eval(&self, z: &PhasePoint) -> CMat {
        let x: [f64; 3] = (*z.x()).into();
        self.lift(&self.field.value(&x))
    }
    fn jet(&self, z: &PhasePoint, tangents: &[Tangent]) -> Jet {
        let x: [f64; 3] = (*z.x()).into();
        let value = self.lift(&self.field.value(&x));
        if tangents.iter().all(|t| t.dx == Vector3::zeros()) {
            let n = self.size();
            return Jet {
                value,
                derivs: vec![CMat::zeros(n, n); tangents.len()],
            };
        }
        let grad = self.field.gradient(&x);
        let derivs = tangents
            .iter()
            .map(|t| {
                let mut d = CMat::zeros(self.field.rank(), self.field.rank());
                for (j, g) in grad.iter().enumerate() {
                    if t.dx[j] != 0.0 {
                        d += g * c64(t.dx[j], 0.0);
                    }
                }
                self.lift(&d)
            })
            .collect();
        Jet { value, derivs }
    }
}

/// Pointwise product `a₁ a₂ ⋯ a_r`.
#[derive(Debug, Clone)]
pub struct Product(pub Vec<Evaluator>);

impl PhaseFn for Product {
    fn size(&self) -> usize {
        self.0[0].size()
    }
    fn eval(&self, z: &PhasePoint) -> CMat {
        let mut acc = self.0[0].eval(z);
        for f in &self.0[1..] {
            acc *= f.eval(z);
        }
        acc
    }
    fn jet(&self, z: &PhasePoint, tangents: &[Tangent]) -> Jet {
        let mut acc = self.0[0].jet(z, tangents);
        for f in &self.0[1..] {
            let b = f.jet(z, tangents);
            let derivs = acc
                .derivs
                .iter()
                .zip(&b.derivs)
                .map(|(da, db)| da * &b.value + &acc.value * db)
                .collect();
            acc = Jet {
                value: &acc.value * &b.value,
                derivs,
            };
        }
        acc
    }
}

/// Linear combination `Σ c_i a_i`.
#[derive(Debug, Clone)]
pub struct Sum(pub Vec<(C64, Evaluator)>);

impl PhaseFn for Sum {
    fn size(&self) -> usize {
        self.0[0].1.size()
    }
    fn eval(&self, z: &PhasePoint) -> CMat {
        let n = self.size();
        let mut acc = CMat::zeros(n, n);
        for (c, f) in &self.0 {
            acc += f.eval(z) * *c;
        }
        acc
    }
    fn jet(&self, z: &PhasePoint, tangents: &[Tangent]) -> Jet {
        let n = self.size();
        let mut value = CMat::zeros(n, n);
        let mut derivs = vec![CMat::zeros(n, n); tangents.len()];
        for (c, f) in &self.0 {
            let j = f.jet(z, tangents);
            value += j.value * *c;
            for (d, dj) in derivs.iter_mut().zip(j.derivs) {
                *d += dj * *c;
            }
        }
        Jet { value, derivs }
    }
}

/// Pointwise inverse `a⁻¹` (NaN-filled where `a` is singular).
#[derive(Debug, Clone)]
pub struct Inverse(pub Evaluator);

fn invert_or_nan(m: CMat) -> CMat {
    let n = m.nrows();
    m.try_inverse()
        .unwrap_or_else(|| CMat::from_element(n, n, c64(f64::NAN, f64::NAN)))
}

impl PhaseFn for Inverse {
    fn size(&self) -> usize {
        self.0.size()
    }
    fn eval(&self, z: &PhasePoint) -> CMat {
        invert_or_nan(self.0.eval(z))
    }
    fn jet(&self, z: &PhasePoint, tangents: &[Tangent]) -> Jet {
        let j = self.0.jet(z, tangents);
        let inv = invert_or_nan(j.value);
        let derivs = j.derivs.iter().map(|d| -(&inv * d * &inv)).collect();
        Jet { value: inv, derivs }
    }
}

/// Pullback `a ∘ (∂g)^l`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub inner: Evaluator,
    pub shift: Arc<ShiftMap>,
    pub power: i32,
}

impl PhaseFn for Pullback {
    fn size(&self) -> usize {
        self.inner.size()
    }
    fn eval(&self, z: &PhasePoint) -> CMat {
        self.inner.eval(&self.shift.apply(z, self.power))
    }
    fn jet(&self, z: &PhasePoint, tangents: &[Tangent]) -> Jet {
        let (w, pushed) = self.shift.push(z, tangents, self.power);
        self.inner.jet(&w, &pushed)
    }
}

/// A square block matrix with blocks of a common size; absent blocks are zero.
#[derive(Debug, Clone)]
pub struct Blocks {
    pub block_size: usize,
    pub grid: usize,
    pub entries: Vec<(usize, usize, Evaluator)>,
}

impl Blocks {
    fn place(&self, blocks: impl Iterator<Item = (usize, usize, CMat)>) -> CMat {
        let b = self.block_size;
        let mut out = CMat::zeros(b * self.grid, b * self.grid);
        for (i, j, m) in blocks {
            let mut view = out.view_mut((i * b, j * b), (b, b));
            view += m;
        }
        out
    }
}

impl PhaseFn for Blocks {
    fn size(&self) -> usize {
        self.block_size * self.grid
    }
    fn eval(&self, z: &PhasePoint) -> CMat {
        self.place(self.entries.iter().map(|(i, j, e)| (*i, *j, e.eval(z))))
    }
    fn jet(&self, z: &PhasePoint, tangents: &[Tangent]) -> Jet {
        let jets: Vec<(usize, usize, Jet)> = self
            .entries
            .iter()
            .map(|(i, j, e)| (*i, *j, e.jet(z, tangents)))
            .collect();
        Jet {
            value: self.place(jets.iter().map(|(i, j, jet)| (*i, *j, jet.value.clone()))),
            derivs: (0..tangents.len())
                .map(|t| self.place(jets.iter().map(|(i, j, jet)| (*i, *j, jet.derivs[t].clone()))))
                .collect(),
        }
    }
}

/// An opaque closure; derivatives by central differences.
#[derive(Clone)]
pub struct FnPhase {
    pub size: usize,
    pub label: String,
    pub f: Arc<dyn Fn(&PhasePoint) -> CMat + Send + Sync>,
}

impl fmt::Debug for FnPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnPhase({})", self.label)
    }
}

impl PhaseFn for FnPhase {
    fn size(&self) -> usize {
        self.size
    }
    fn eval(&self, z: &PhasePoint) -> CMat {
        (self.f)(z)
    }
}

/// Convenience constructors.
pub mod build {
    use super::*;

    /// Constant evaluator.
    pub fn constant(m: CMat) -> Evaluator {
        Arc::new(Constant(m))
    }

    /// Identity of size `n`.
    pub fn one(n: usize) -> Evaluator {
        constant(identity(n))
    }

    /// `p(ξ) ⊗ 1_N`.
    pub fn dirac_projection(coeff_rank: usize) -> Evaluator {
        Arc::new(DiracProjection { coeff_rank })
    }

    /// `1 − a`.
    pub fn one_minus(a: &Evaluator) -> Evaluator {
        let n = a.size();
        Arc::new(Sum(vec![(c64(1.0, 0.0), one(n)), (c64(-1.0, 0.0), a.clone())]))
    }

    /// `a + b`.
    pub fn add(a: &Evaluator, b: &Evaluator) -> Evaluator {
        Arc::new(Sum(vec![(c64(1.0, 0.0), a.clone()), (c64(1.0, 0.0), b.clone())]))
    }

    /// Product of several evaluators.
    pub fn product(items: &[&Evaluator]) -> Evaluator {
        Arc::new(Product(items.iter().map(|e| (*e).clone()).collect()))
    }

    /// Pointwise inverse.
    pub fn inverse(a: &Evaluator) -> Evaluator {
        Arc::new(Inverse(a.clone()))
    }

    /// `a ∘ (∂g)^l`.
    pub fn pullback(a: &Evaluator, shift: &Arc<ShiftMap>, power: i32) -> Evaluator {
        if power == 0 {
            return a.clone();
        }
        Arc::new(Pullback {
            inner: a.clone(),
            shift: shift.clone(),
            power,
        })
    }

    /// `1_{ℂ^leading} ⊗ f(x)`.
    pub fn on_base(field: Arc<dyn TorusField>, leading: usize) -> Evaluator {
        Arc::new(OnBase { field, leading })
    }

    /// A `grid × grid` block matrix; every block must have size `block_size`.
    pub fn blocks(block_size: usize, grid: usize, entries: &[(usize, usize, &Evaluator)]) -> Evaluator {
        Arc::new(Blocks {
            block_size,
            grid,
            entries: entries.iter().map(|(i, j, e)| (*i, *j, (*e).clone())).collect(),
        })
    }

    /// Wraps a closure.
    pub fn closure(
        size: usize,
        label: impl Into<String>,
        f: impl Fn(&PhasePoint) -> CMat + Send + Sync + 'static,
    ) -> Evaluator {
        Arc::new(FnPhase {
            size,
            label: label.into(),
            f: Arc::new(f),
        })
    }
}
