//! Invertibility checks for `D₁ = PTP + (1 − P)`.
//!
//! On the symbol level `D₁` is invertible iff `p(ξ)` maps `im p((∂g)⁻¹ξ)` isomorphically onto
//! `im p(ξ)`, i.e. iff `ξ` and `(∂g)⁻¹ξ` are never antipodal. On the lattice, the probe
//! computes the smallest singular value of `D₁` restricted to an interior sub-window, a finite
//! surrogate for invertibility on the unbounded mode space.

use std::collections::BTreeMap;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::dirac::positive_spinor;
use super::lattice::{d1_columns, LatticeWindow, SparseVec};
use crate::crossed_symbol::ShiftMap;
use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_eigenvalues, CMat, C64};

/// Result of [`d1_margin`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct D1Margin {
    /// `min 1 + cos∠(ξ, (∂g)⁻¹ξ)` over the samples.
    pub angle_margin: f64,
    /// `min` smallest singular value of `p(ξ) : im p((∂g)⁻¹ξ) → im p(ξ)`.
    pub min_singular_value: f64,
    /// Sample at which the angle margin is attained.
    pub worst_sample: [f64; 3],
    /// Number of samples.
    pub sample_count: usize,
}

impl D1Margin {
    /// True when both margins are strictly positive.
    pub fn certifies(&self) -> bool {
        self.angle_margin > 0.0 && self.min_singular_value > 0.0
    }
}

/// Evaluates the symbol-level invertibility margin of `D₁` on sphere samples.
pub fn d1_margin(shift: &ShiftMap, samples: &[[f64; 3]]) -> Result<D1Margin> {
    if samples.is_empty() {
        return Err(Error::precondition("d1_margin needs at least one sample"));
    }
    let inv_codiff = shift.codiff_power(-1);
    let mut out = D1Margin {
        angle_margin: f64::INFINITY,
        min_singular_value: f64::INFINITY,
        worst_sample: samples[0],
        sample_count: samples.len(),
    };
    for s in samples {
        let xi = Vector3::from(*s).normalize();
        let eta = (inv_codiff * xi).normalize();
        let margin = 1.0 + xi.dot(&eta);
        if margin < out.angle_margin {
            out.angle_margin = margin;
            out.worst_sample = *s;
        }
        // p(ξ) restricted to the line im p(η), measured against the line im p(ξ).
        let (u, w) = (positive_spinor(&xi), positive_spinor(&eta));
        let overlap = (u[0].conj() * w[0] + u[1].conj() * w[1]).norm();
        out.min_singular_value = out.min_singular_value.min(overlap);
    }
    Ok(out)
}

/// Result of [`invertibility_probe_d1`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct D1Probe {
    /// Window radius `R`.
    pub radius: usize,
    /// Sub-window radius `⌊R/3⌋` whose columns are probed.
    pub subwindow_radius: usize,
    /// Number of probed columns.
    pub columns: usize,
    /// Number of decoupled blocks of `D₁*D₁` on the sub-window.
    pub blocks: usize,
    /// Smallest singular value of the restricted operator.
    pub smallest_singular_value: f64,
}

/// Smallest singular value of `D₁` (coefficient rank 1) on the columns of the interior
/// sub-window `|k|_∞ ≤ R/3` of the window `|k|_∞ ≤ R`.
///
/// The restricted Gram matrix is block diagonal along orbit segments of the shift; each block
/// is diagonalized densely.
pub fn invertibility_probe_d1(radius: usize, shift: &ShiftMap) -> Result<D1Probe> {
    if radius < 4 {
        return Err(Error::precondition(format!(
            "the D₁ probe needs a window radius of at least 4, got {radius}"
        )));
    }
    let window = LatticeWindow::new(radius, 1);
    let sub = (radius / 3) as i64;
    let modes: Vec<usize> = (0..window.modes())
        .filter(|&m| window.mode(m).iter().all(|v| v.abs() <= sub))
        .collect();
    let columns = d1_columns(window, shift, &modes);
    let blocks = connected_blocks(&columns);
    let mut smallest = f64::INFINITY;
    for block in &blocks {
        let gram = CMat::from_fn(block.len(), block.len(), |i, j| dot(&columns[block[i]], &columns[block[j]]));
        let lambda = hermitian_eigenvalues(&gram)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        smallest = smallest.min(lambda.max(0.0).sqrt());
    }
    Ok(D1Probe {
        radius,
        subwindow_radius: sub as usize,
        columns: columns.len(),
        blocks: blocks.len(),
        smallest_singular_value: smallest,
    })
}

fn dot(a: &SparseVec, b: &SparseVec) -> C64 {
    a.iter()
        .filter_map(|(i, va)| b.get(i).map(|vb| va.conj() * vb))
        .fold(c64(0.0, 0.0), |acc, v| acc + v)
}

/// Groups columns that share a nonzero row (union–find), in increasing column order.
fn connected_blocks(columns: &[SparseVec]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..columns.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (c, col) in columns.iter().enumerate() {
        for row in col.keys() {
            match owner.get(row) {
                Some(&other) => {
                    let (a, b) = (find(&mut parent, c), find(&mut parent, other));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
                None => {
                    owner.insert(*row, c);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..columns.len() {
        let root = find(&mut parent, c);
        groups.entry(root).or_default().push(c);
    }
    groups.into_values().collect()
}
