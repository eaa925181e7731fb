//! The odd index integral `∫_{T³} tr(f⁻¹df)³` and an independent mapping-degree oracle.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::TorusGrid;
use super::report::Estimate;
use crate::crossed_symbol::TorusField;
use crate::error::{Error, Result};
use crate::linalg::{c64, pairwise_sum, pairwise_sum_c, CMat, C64};

/// Orientation convention of every oriented integral in this crate.
///
/// The cosphere bundle `S*T³ = T³ × S²` carries the product orientation; `T³` and the outward
/// sphere are each multiplied by this sign. Its value is fixed by requiring the degree-one
/// test map to have index `+1`, and then frozen.
pub const ORIENTATION_SIGN: f64 = -1.0;

/// Nodes where `|det f|` falls below this are rejected as near-singular.
pub const MIN_ABS_DET: f64 = 1e-8;

/// Result of [`topological_index_f`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologicalReport {
    /// Real part of the integral, with nearest integer and gap.
    pub estimate: Estimate,
    /// Imaginary residue (should vanish).
    pub imaginary: f64,
    /// `min |det f|` over the grid nodes.
    pub min_abs_det: f64,
    /// Grid resolution `M`.
    pub resolution: usize,
}

/// Samples the entries of a matrix field on the grid; entry `(r, c)` is `out[r·N + c]`.
fn sample_entries(field: &dyn TorusField, grid: &TorusGrid) -> (Vec<CMat>, Vec<Vec<C64>>) {
    let n = field.rank();
    let values: Vec<CMat> = grid.nodes().par_iter().map(|x| field.value(x)).collect();
    let entries = (0..n * n)
        .map(|e| values.iter().map(|v| v[(e / n, e % n)]).collect())
        .collect();
    (values, entries)
}

/// Spectral derivatives `∂_j f` at every node, for `j = 0, 1, 2`.
fn spectral_gradient(entries: &[Vec<C64>], n: usize, grid: &TorusGrid) -> [Vec<CMat>; 3] {
    std::array::from_fn(|axis| {
        let d: Vec<Vec<C64>> = entries
            .iter()
            .map(|e| grid.spectral_derivative(e, axis))
            .collect();
        (0..grid.len())
            .map(|i| CMat::from_fn(n, n, |r, c| d[r * n + c][i]))
            .collect()
    })
}

const PERMUTATIONS: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
    ([1, 0, 2], -1.0),
];

/// `ind = 1/((2πi)²·3!) ∫_{T³} tr(f⁻¹df)³`, with `df` by spectral differentiation and the
/// 3-form antisymmetrized over the six axis orderings.
pub fn topological_index_f(field: &dyn TorusField, grid: &TorusGrid) -> Result<TopologicalReport> {
    let n = field.rank();
    let (values, entries) = sample_entries(field, grid);
    let (min_det, worst) = values
        .iter()
        .enumerate()
        .map(|(i, v)| (v.determinant().norm(), i))
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
    if !(min_det >= MIN_ABS_DET) {
        return Err(Error::domain(format!(
            "f is near-singular: |det f| = {min_det:.3e} at x = {:?}",
            grid.node(worst)
        )));
    }
    let grad = spectral_gradient(&entries, n, grid);
    let integrand: Vec<C64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let inv = values[i].clone().try_inverse().expect("checked invertible");
            let omega: [CMat; 3] = std::array::from_fn(|j| &inv * &grad[j][i]);
            PERMUTATIONS
                .iter()
                .map(|(p, s)| (&omega[p[0]] * &omega[p[1]] * &omega[p[2]]).trace() * *s)
                .sum()
        })
        .collect();
    let total = pairwise_sum_c(&integrand) * grid.weight();
    // (2πi)² · 3! = −24π².
    let value = total * c64(ORIENTATION_SIGN / (-24.0 * PI * PI), 0.0);
    Ok(TopologicalReport {
        estimate: Estimate::new(value.re),
        imaginary: value.im,
        min_abs_det: min_det,
        resolution: grid.resolution(),
    })
}

/// Result of [`degree_oracle`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    /// Mapping degree estimate, with nearest integer and gap.
    pub estimate: Estimate,
    /// Largest deviation of `f` from SU(2) at the nodes.
    pub su2_defect: f64,
    /// Grid resolution `M`.
    pub resolution: usize,
}

/// Quaternionic coordinates `(q₀, q₁, q₂, q₃)` of `q₀ + i(q₁c₁ + q₂c₂ + q₃c₃)`.
fn quaternion(m: &CMat) -> [f64; 4] {
    [m[(0, 0)].re, m[(0, 1)].im, m[(0, 1)].re, m[(0, 0)].im]
}

/// Mapping degree of `f : T³ → SU(2) ≅ S³`, as the integral of the pullback of the
/// normalized volume form: `(1/2π²) ∫ det[q, ∂₁q, ∂₂q, ∂₃q] dx` with `q = (q₀, q₁, q₂, q₃)`.
pub fn degree_oracle(field: &dyn TorusField, grid: &TorusGrid) -> Result<DegreeReport> {
    if field.rank() != 2 {
        return Err(Error::domain(format!(
            "the degree oracle needs 2×2 SU(2)-valued maps, got rank {}",
            field.rank()
        )));
    }
    let values: Vec<CMat> = grid.nodes().par_iter().map(|x| field.value(x)).collect();
    let mut defect: f64 = 0.0;
    for v in &values {
        let q = quaternion(v);
        let rebuilt = CMat::from_row_slice(
            2,
            2,
            &[c64(q[0], q[3]), c64(q[2], q[1]), c64(-q[2], q[1]), c64(q[0], -q[3])],
        );
        let d = (v - rebuilt).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let unit = (q.iter().map(|t| t * t).sum::<f64>() - 1.0).abs();
        defect = defect.max(d).max(unit);
    }
    if !(defect <= 1e-8) {
        return Err(Error::domain(format!(
            "values are off SU(2) by {defect:.3e} (tolerance 1e−8)"
        )));
    }
    let coords: Vec<Vec<C64>> = (0..4)
        .map(|c| values.iter().map(|v| c64(quaternion(v)[c], 0.0)).collect())
        .collect();
    let derivs: Vec<[Vec<C64>; 3]> = coords
        .iter()
        .map(|c| std::array::from_fn(|axis| grid.spectral_derivative(c, axis)))
        .collect();
    let dets: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            Matrix4::from_fn(|r, c| {
                if c == 0 {
                    coords[r][i].re
                } else {
                    derivs[r][c - 1][i].re
                }
            })
            .determinant()
        })
        .collect();
    let value = pairwise_sum(&dets) * grid.weight() / (2.0 * PI * PI);
    Ok(DegreeReport {
        estimate: Estimate::new(value),
        su2_defect: defect,
        resolution: grid.resolution(),
    })
}
