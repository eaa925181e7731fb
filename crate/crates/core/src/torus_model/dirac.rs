//! The Dirac symbol on `T³` and its positive spectral projection.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat};

/// The Pauli matrices `c₁, c₂, c₃`.
pub fn pauli(j: usize) -> CMat {
    let z = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    match j {
        0 => CMat::from_row_slice(2, 2, &[z, one, one, z]),
        1 => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        2 => CMat::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => panic!("Pauli index {j} out of range 0..3"),
    }
}

/// Clifford multiplication `c(v) = v₁c₁ + v₂c₂ + v₃c₃` (no normalization).
pub fn clifford(v: &Vector3<f64>) -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[
            c64(v.z, 0.0),
            c64(v.x, -v.y),
            c64(v.x, v.y),
            c64(-v.z, 0.0),
        ],
    )
}

/// The Dirac symbol `c(ξ/|ξ|)`.
pub fn dirac_symbol(xi: [f64; 3]) -> Result<CMat> {
    let v = Vector3::from(xi);
    let n = v.norm();
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::domain("the Dirac symbol is undefined at the zero covector"));
    }
    Ok(clifford(&(v / n)))
}

/// `p(ξ) = (1 + c(ξ))/2` at a unit covector.
pub fn spectral_projection_xi(xi: &Vector3<f64>) -> CMat {
    let mut p = clifford(xi);
    p[(0, 0)] += 1.0;
    p[(1, 1)] += 1.0;
    p * c64(0.5, 0.0)
}

/// The spectral projection on the Fourier mode `k`: `p(k/|k|)` for `k ≠ 0` and the zero
/// matrix at `k = 0` (the harmonic spinors belong to the range of `1 − P`).
pub fn spectral_projection(k: [i64; 3]) -> CMat {
    if k == [0, 0, 0] {
        return CMat::zeros(2, 2);
    }
    let v = Vector3::new(k[0] as f64, k[1] as f64, k[2] as f64);
    spectral_projection_xi(&(v / v.norm()))
}

/// A unit vector spanning the range of `p(ξ)` at a unit covector.
pub fn positive_spinor(xi: &Vector3<f64>) -> [crate::linalg::C64; 2] {
    // Eigenvector of c(ξ) for +1: (1 + ξ₃, ξ₁ + iξ₂) or, near ξ₃ = −1, (ξ₁ − iξ₂, 1 − ξ₃).
    let (a, b) = if xi.z > -0.5 {
        (c64(1.0 + xi.z, 0.0), c64(xi.x, xi.y))
    } else {
        (c64(xi.x, -xi.y), c64(1.0 - xi.z, 0.0))
    };
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / n, b / n]
}
