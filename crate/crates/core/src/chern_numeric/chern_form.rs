//! The Chern character form `ch p = tr[p exp(−dp dp/2πi)]₀` of a projection in the crossed
//! product.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::sphere::SphereQuadrature;
use super::topological::ORIENTATION_SIGN;
use crate::crossed_symbol::{sphere_frame, trace_form_product, CrossedSymbol, Factor, PhasePoint, ShiftMap, Tangent};
use crate::error::{Error, Result};
use crate::linalg::{c64, frobenius, pairwise_sum_c, CMat, C64};

/// Degree-0, 2 and 4 components of `ch p` at one point, evaluated on the leading vectors of
/// a tangent frame (components whose degree exceeds the frame size are `None`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernForm {
    pub degree0: C64,
    pub degree2: Option<C64>,
    pub degree4: Option<C64>,
}

/// `max_k ‖(p·p − p)(k)(z)‖_F`.
pub fn idempotency_defect(p: &CrossedSymbol, g: &ShiftMap, z: &PhasePoint) -> f64 {
    let n = p.rank();
    let mut keys: Vec<i32> = Vec::new();
    for &l in p.components().keys() {
        for &m in p.components().keys() {
            keys.push(l + m);
        }
    }
    keys.extend(p.components().keys());
    keys.sort_unstable();
    keys.dedup();
    let mut worst: f64 = 0.0;
    for k in keys {
        let mut acc = CMat::zeros(n, n);
        for (&l, al) in p.components() {
            if let Some(bm) = p.component(k - l) {
                acc += al.eval(z) * bm.eval(&g.apply(z, l));
            }
        }
        if let Some(pk) = p.component(k) {
            acc -= pk.eval(z);
        }
        let d = frobenius(&acc);
        worst = if d.is_finite() { worst.max(d) } else { f64::INFINITY };
    }
    worst
}

/// `(1/j!)(−1/2πi)^j tr(p (dp)^{2j})₀` on `frame[..2j]`.
fn component(p: &CrossedSymbol, g: &ShiftMap, z: &PhasePoint, frame: &[Tangent], j: usize) -> C64 {
    let mut factors = vec![Factor::Value(p)];
    factors.extend(std::iter::repeat_n(Factor::Differential(p), 2 * j));
    let tr = trace_form_product(&factors, g, z, &frame[..2 * j]);
    let factorial = (1..=j).product::<usize>() as f64;
    // −1/(2πi) = i/(2π).
    let c = c64(0.0, 1.0 / (2.0 * PI)).powi(j as i32);
    tr * c / factorial
}

/// The components of `ch p` at `z`, evaluated on the frame.
pub fn ch_flat_projection(p: &CrossedSymbol, g: &ShiftMap, z: &PhasePoint, frame: &[Tangent]) -> Result<ChernForm> {
    let defect = idempotency_defect(p, g, z);
    if !(defect <= 1e-10) {
        return Err(Error::precondition(format!(
            "p is not idempotent at the node: ‖p² − p‖ = {defect:.3e}"
        )));
    }
    let degree0 = p.component(0).map(|e| e.eval(z).trace()).unwrap_or(c64(0.0, 0.0));
    Ok(ChernForm {
        degree0,
        degree2: (frame.len() >= 2).then(|| component(p, g, z, frame, 1)),
        degree4: (frame.len() >= 4).then(|| component(p, g, z, frame, 2)),
    })
}

/// `∫_{S²} ch₂ p` over the cosphere at the base point `x`, with the crate's orientation.
pub fn sphere_chern_integral(p: &CrossedSymbol, g: &ShiftMap, x: [f64; 3], quad: &SphereQuadrature) -> Result<C64> {
    let mut terms = Vec::with_capacity(quad.len());
    for (xi, w) in quad.nodes().iter().zip(quad.weights()) {
        let z = PhasePoint::new(x, *xi)?;
        let [t1, t2] = sphere_frame(z.xi());
        let frame = [Tangent::along_xi(t1), Tangent::along_xi(t2)];
        let form = ch_flat_projection(p, g, &z, &frame)?;
        terms.push(form.degree2.expect("two-vector frame") * *w);
    }
    Ok(pairwise_sum_c(&terms) * ORIENTATION_SIGN)
}
