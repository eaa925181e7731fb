//! The index as a single integral over the cosphere bundle:
//! `ind = (n−1)!/((2πi)ⁿ(2n−1)!) ∫_{S*M} tr(σ⁻¹dσ)^{2n−1}₀`, instantiated for `n = 3`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::TorusGrid;
use super::report::Estimate;
use super::sphere::SphereQuadrature;
use super::topological::ORIENTATION_SIGN;
use crate::crossed_symbol::{full_frame, trace_maurer_cartan_power, CrossedSymbol, PhasePoint, ShiftMap};
use crate::error::{Error, Result};
use crate::linalg::{c64, pairwise_sum_c, C64};

/// Result of [`nice_index`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NiceIndexReport {
    /// Real part, with nearest integer and gap.
    pub estimate: Estimate,
    /// Imaginary residue.
    pub imaginary: f64,
    /// Torus grid resolution.
    pub torus_resolution: usize,
    /// Sphere rule label.
    pub sphere_rule: String,
}

/// `2!/((2πi)³·5!) ∫_{T³×S²} tr((σ⁻¹dσ)⁵)₀` on the product grid.
///
/// The 5-form is evaluated on the frame `(∂x₁, ∂x₂, ∂x₃, t₁, t₂)` with `t₁ × t₂ = ξ`, using
/// exact jets of the symbol components; `T³ × S²` carries the product orientation, i.e. the
/// orientation sign enters squared.
pub fn nice_index(
    sigma: &CrossedSymbol,
    sigma_inv: Option<&CrossedSymbol>,
    g: &ShiftMap,
    torus: &TorusGrid,
    sphere: &SphereQuadrature,
) -> Result<NiceIndexReport> {
    let inv = sigma_inv.ok_or_else(|| {
        Error::precondition("nice_index needs a candidate inverse of the symbol")
    })?;
    let xs = torus.nodes();
    let points: Vec<(usize, usize)> = (0..xs.len())
        .flat_map(|i| (0..sphere.len()).map(move |j| (i, j)))
        .collect();
    let terms: Vec<Result<C64>> = points
        .par_iter()
        .map(|&(i, j)| {
            let z = PhasePoint::new(xs[i], sphere.nodes()[j])?;
            let frame = full_frame(&z);
            let v = trace_maurer_cartan_power(sigma, inv, g, &z, &frame);
            Ok(v * (torus.weight() * sphere.weights()[j]))
        })
        .collect();
    let terms: Vec<C64> = terms.into_iter().collect::<Result<_>>()?;
    let integral = pairwise_sum_c(&terms);
    // (2πi)³ = −8π³i; 2!/5! = 1/60.
    let constant = c64(1.0 / 60.0, 0.0) / c64(0.0, -8.0 * PI.powi(3));
    let value = integral * constant * (ORIENTATION_SIGN * ORIENTATION_SIGN);
    if !value.re.is_finite() {
        return Err(Error::domain(
            "the Maurer–Cartan integrand is not finite (the inverse is singular somewhere)",
        ));
    }
    Ok(NiceIndexReport {
        estimate: Estimate::new(value.re),
        imaginary: value.im,
        torus_resolution: torus.resolution(),
        sphere_rule: sphere.label().to_string(),
    })
}
