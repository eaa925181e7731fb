//! Ellipticity certificates on declared sample sets.

use std::f64::consts::TAU;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::phase::{PhasePoint, ShiftMap};
use super::symbol::{deviation_from_identity, multiply, CrossedSymbol};
use crate::error::{Error, Result};
use crate::linalg::spectral_norm;

/// A finite, reproducible set of phase points.
#[derive(Clone, Debug)]
pub struct SampleSet {
    points: Vec<PhasePoint>,
    label: String,
}

impl SampleSet {
    /// Wraps explicit points.
    pub fn from_points(points: Vec<PhasePoint>, label: impl Into<String>) -> Self {
        Self {
            points,
            label: label.into(),
        }
    }

    /// Product of base nodes and fibre directions (fibre index fastest).
    pub fn product(x_nodes: &[[f64; 3]], xi_nodes: &[[f64; 3]], label: impl Into<String>) -> Result<Self> {
        let mut points = Vec::with_capacity(x_nodes.len() * xi_nodes.len());
        for x in x_nodes {
            for xi in xi_nodes {
                points.push(PhasePoint::new(*x, *xi)?);
            }
        }
        Ok(Self::from_points(points, label))
    }

    /// `count` points, uniform on `T³ × S²`, from a seeded ChaCha stream.
    pub fn random(count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..count)
            .map(|_| {
                let x = [rng.random::<f64>() * TAU, rng.random::<f64>() * TAU, rng.random::<f64>() * TAU];
                PhasePoint::new(x, random_unit_vector(&mut rng)).expect("unit vector")
            })
            .collect();
        Self::from_points(points, format!("random({count}, seed {seed})"))
    }

    /// The points.
    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True if empty.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Human-readable description.
    pub fn label(&self) -> &str {
        &self.label
    }
}

/// A uniformly distributed unit vector in `ℝ³` (Archimedes' projection).
pub fn random_unit_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.random::<f64>() * 2.0 - 1.0;
    let phi: f64 = rng.random::<f64>() * TAU;
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Outcome of an ellipticity check on a sample set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticityCertificate {
    /// Lower bound `1 / max_z Σ_k ‖a⁻¹(k)(z)‖₂` for the smallest singular value of `a`.
    pub min_singular_value: f64,
    /// Number of sample points.
    pub sample_count: usize,
    /// Max over samples of the Frobenius deviation of `a·a⁻¹` and `a⁻¹·a` from `𝟏`.
    pub residual: f64,
    /// Sample set description.
    pub samples: String,
}

impl EllipticityCertificate {
    /// Residual below `tol`.
    pub fn certifies(&self, tol: f64) -> bool {
        self.residual < tol
    }
}

/// Evaluates both products `a·a⁻¹` and `a⁻¹·a` on the samples and records the worst deviation
/// from the unit.
pub fn check_elliptic(
    a: &CrossedSymbol,
    a_inv: &CrossedSymbol,
    g: &Arc<ShiftMap>,
    samples: &SampleSet,
) -> Result<EllipticityCertificate> {
    if a.rank() != a_inv.rank() {
        return Err(Error::structural(format!(
            "rank mismatch: {} vs {}",
            a.rank(),
            a_inv.rank()
        )));
    }
    let right = multiply(a, a_inv, g)?;
    let left = multiply(a_inv, a, g)?;
    let per_point: Vec<(f64, f64)> = samples
        .points()
        .par_iter()
        .map(|z| {
            let r = deviation_from_identity(&right, z).max(deviation_from_identity(&left, z));
            let inv_norm: f64 = a_inv
                .components()
                .values()
                .map(|e| spectral_norm(&e.eval(z)))
                .sum();
            (r, inv_norm)
        })
        .collect();
    let mut residual: f64 = 0.0;
    let mut inv_norm: f64 = 0.0;
    for (r, n) in per_point {
        residual = if r.is_nan() { f64::INFINITY } else { residual.max(r) };
        inv_norm = if n.is_nan() { f64::INFINITY } else { inv_norm.max(n) };
    }
    Ok(EllipticityCertificate {
        min_singular_value: if inv_norm > 0.0 { 1.0 / inv_norm } else { f64::INFINITY },
        sample_count: samples.len(),
        residual,
        samples: samples.label().to_string(),
    })
}
