//! Pairing of projections over the crossed product with cyclic cocycles:
//! `⟨[p], [φ]⟩ = Σ_k (−1)^k (2k)!/k! · φ_{2k}(p − ½, p, …, p)`.
//!
//! Arguments are matrix-valued symbols; the matrix trace is part of every cochain, which is
//! the convention `tr(m₀m₁⋯m_l)·φ_l` for matrices over the algebra.

use std::sync::Arc;

use super::sphere::SphereQuadrature;
use super::topological::ORIENTATION_SIGN;
use crate::crossed_symbol::{
    build, sphere_frame, trace_form_product, CrossedSymbol, Factor, PhasePoint, ShiftMap, Tangent,
};
use crate::error::Result;
use crate::linalg::{c64, pairwise_sum_c, C64};

/// A node of a flat cochain: point, oriented tangent frame and weight.
#[derive(Clone, Debug)]
pub struct FlatNode {
    pub point: PhasePoint,
    pub frame: Vec<Tangent>,
    pub weight: f64,
}

/// A component `φ_{2k}` of a cyclic cocycle.
#[derive(Clone, Debug)]
pub enum Cochain {
    /// `φ₀(a) = tr a(0)(z)`, the trace at a point.
    PointTrace(PhasePoint),
    /// `φ_{2k}(a₀, …, a_{2k}) = (1/(2k)!) ∫ tr(a₀ da₁ ⋯ da_{2k})₀` over an invariant measure,
    /// the frames giving the orientation; `2k` is the frame size.
    Flat(Vec<FlatNode>),
}

impl Cochain {
    /// Degree `2k` of the cochain.
    pub fn degree(&self) -> usize {
        match self {
            Cochain::PointTrace(_) => 0,
            Cochain::Flat(nodes) => nodes.first().map(|n| n.frame.len()).unwrap_or(0),
        }
    }

    /// Evaluates on `degree + 1` arguments.
    pub fn eval(&self, args: &[&CrossedSymbol], g: &ShiftMap) -> C64 {
        match self {
            Cochain::PointTrace(z) => args[0]
                .component(0)
                .map(|e| e.eval(z).trace())
                .unwrap_or(c64(0.0, 0.0)),
            Cochain::Flat(nodes) => {
                let mut factors = vec![Factor::Value(args[0])];
                factors.extend(args[1..].iter().map(|a| Factor::Differential(a)));
                let degree = args.len() - 1;
                let factorial = (1..=degree).product::<usize>() as f64;
                let terms: Vec<C64> = nodes
                    .iter()
                    .map(|n| trace_form_product(&factors, g, &n.point, &n.frame) * n.weight)
                    .collect();
                pairwise_sum_c(&terms) / factorial
            }
        }
    }
}

/// The flat cocycle of the cosphere `S²` over a base point, with the crate orientation.
pub fn flat_sphere_cochain(x: [f64; 3], quad: &SphereQuadrature) -> Result<Cochain> {
    let nodes = quad
        .nodes()
        .iter()
        .zip(quad.weights())
        .map(|(xi, w)| {
            let point = PhasePoint::new(x, *xi)?;
            let [t1, t2] = sphere_frame(point.xi());
            Ok(FlatNode {
                point,
                frame: vec![Tangent::along_xi(t1), Tangent::along_xi(t2)],
                weight: w * ORIENTATION_SIGN,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Cochain::Flat(nodes))
}

/// `Σ_k (−1)^k (2k)!/k! · φ_{2k}(p − ½, p, …, p)` over the given components.
pub fn pairing_with_cocycle(p: &CrossedSymbol, cocycle: &[Cochain], g: &ShiftMap) -> C64 {
    let shifted = p
        .add(&CrossedSymbol::identity(p.rank()).scale(c64(-0.5, 0.0)))
        .expect("equal ranks");
    let mut total = c64(0.0, 0.0);
    for phi in cocycle {
        let degree = phi.degree();
        let k = degree / 2;
        let mut args = vec![&shifted];
        args.extend(std::iter::repeat_n(p, degree));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = (k + 1..=2 * k).product::<usize>() as f64;
        total += phi.eval(&args, g) * (sign * coeff);
    }
    total
}

/// A projection over `C∞(S²) ⋊ ℤ` that is not supported at `k = 0` alone: with `b` the Bott
/// projection, `V = 1 + e₁₂T` and `p = diag(b, 0)`, the conjugate
/// `VpV⁻¹ = [[b, −bT], [0, 0]]`. The shift rotates the sphere by a quarter turn about `ξ₃`.
pub fn rotated_bott_toy() -> Result<(CrossedSymbol, Arc<ShiftMap>)> {
    let shift = Arc::new(ShiftMap::new([[0, -1, 0], [1, 0, 0], [0, 0, 1]])?);
    let b = build::dirac_projection(1);
    let minus_b = build::product(&[&build::constant(crate::linalg::identity(2) * c64(-1.0, 0.0)), &b]);
    let p = CrossedSymbol::new(
        4,
        [
            (0, build::blocks(2, 2, &[(0, 0, &b)])),
            (1, build::blocks(2, 2, &[(0, 1, &minus_b)])),
        ],
    )?;
    Ok((p, shift))
}
