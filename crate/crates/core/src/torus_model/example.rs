//! Symbols of the shift operators of the torus example.
//!
//! With `p = p(ξ) ⊗ 1_N`, `q = p ∘ ∂g` and `f` acting on the coefficient factor:
//!
//! * `σ(D) = f·p·q·T + (1 − p)`, the symbol of `D = f·PTP + (1 − P)`;
//! * `σ(B) = (1 − p) + T⁻¹·(w f⁻¹)` with `w = (qpq + 1 − q)⁻¹ q p`, a two-sided inverse;
//! * `σ₀ = f p + (1 − p)` and `σ₁ = p q T + (1 − p)`, with `σ(D) = σ₀ σ₁`.
//!
//! `f` acts on the coefficient factor and `p` on the spinor factor, so they commute and
//! `σ₀⁻¹ = f⁻¹ p + (1 − p)`.

use std::sync::Arc;

use crate::crossed_symbol::{build, CrossedSymbol, Evaluator, ShiftMap, TorusField};
use crate::error::Result;

/// The example symbols and their inverses for a given `f`.
#[derive(Clone, Debug)]
pub struct ExampleSymbols {
    /// `σ(D)`.
    pub sigma_d: CrossedSymbol,
    /// `σ(B) = σ(D)⁻¹`.
    pub sigma_b: CrossedSymbol,
    /// `σ₀ = f p + 1 − p`.
    pub sigma0: CrossedSymbol,
    /// `σ₀⁻¹`.
    pub sigma0_inv: CrossedSymbol,
    /// `σ₁ = p q T + 1 − p`.
    pub sigma1: CrossedSymbol,
    /// `σ₁⁻¹`.
    pub sigma1_inv: CrossedSymbol,
    /// The shift used throughout.
    pub shift: Arc<ShiftMap>,
}

/// Builds the example symbols for `f : T³ → GL_N(ℂ)` and an integer torus automorphism.
pub fn example_symbols(f: Arc<dyn TorusField>, shift: Arc<ShiftMap>) -> Result<ExampleSymbols> {
    let n = f.rank();
    let size = 2 * n;
    let p = build::dirac_projection(n);
    let one_minus_p = build::one_minus(&p);
    let q = build::pullback(&p, &shift, 1);
    let f_lift = build::on_base(f, 2);
    let f_inv = build::inverse(&f_lift);

    // w = (qpq + 1 − q)⁻¹ q p
    let qpq = build::product(&[&q, &p, &q]);
    let u = build::add(&qpq, &build::one_minus(&q));
    let w = build::product(&[&build::inverse(&u), &q, &p]);
    let w_f_inv = build::product(&[&w, &f_inv]);

    let sigma_d = CrossedSymbol::new(
        size,
        [(1, build::product(&[&f_lift, &p, &q])), (0, one_minus_p.clone())],
    )?;
    let sigma_b = CrossedSymbol::new(
        size,
        [(0, one_minus_p.clone()), (-1, build::pullback(&w_f_inv, &shift, -1))],
    )?;
    let sigma1 = CrossedSymbol::new(size, [(1, build::product(&[&p, &q])), (0, one_minus_p.clone())])?;
    let sigma1_inv = CrossedSymbol::new(
        size,
        [(0, one_minus_p.clone()), (-1, build::pullback(&w, &shift, -1))],
    )?;
    let sigma0 = scalar_two_term(&f_lift, &p, &one_minus_p)?;
    let sigma0_inv = scalar_two_term(&f_inv, &p, &one_minus_p)?;
    Ok(ExampleSymbols {
        sigma_d,
        sigma_b,
        sigma0,
        sigma0_inv,
        sigma1,
        sigma1_inv,
        shift,
    })
}

/// `a p + (1 − p)` as a symbol supported at `k = 0`.
fn scalar_two_term(a: &Evaluator, p: &Evaluator, one_minus_p: &Evaluator) -> Result<CrossedSymbol> {
    let ap = build::product(&[a, p]);
    Ok(CrossedSymbol::scalar_part(build::add(&ap, one_minus_p)))
}
