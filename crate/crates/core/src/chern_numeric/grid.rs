//! Uniform product grids on `T³` with FFT-based spectral differentiation.

use std::f64::consts::TAU;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, C64};

/// The grid `{2πj/M : j = 0, …, M−1}³` with the trapezoid weights `(2π/M)³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGrid {
    m: usize,
}

impl TorusGrid {
    /// `M` must be even and at least 8.
    pub fn new(m: usize) -> Result<Self> {
        if m < 8 || m % 2 != 0 {
            return Err(Error::precondition(format!(
                "torus grid resolution must be even and at least 8, got {m}"
            )));
        }
        Ok(Self { m })
    }

    /// Points per axis.
    pub fn resolution(&self) -> usize {
        self.m
    }

    /// Total number of nodes `M³`.
    pub fn len(&self) -> usize {
        self.m * self.m * self.m
    }

    /// Always false (a grid has at least 512 nodes).
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight of every node.
    pub fn weight(&self) -> f64 {
        (TAU / self.m as f64).powi(3)
    }

    /// Node with flat index `(i₀·M + i₁)·M + i₂`.
    pub fn node(&self, idx: usize) -> [f64; 3] {
        let m = self.m;
        let h = TAU / m as f64;
        [
            (idx / (m * m)) as f64 * h,
            ((idx / m) % m) as f64 * h,
            (idx % m) as f64 * h,
        ]
    }

    /// All nodes in flat-index order.
    pub fn nodes(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    /// Integer frequency of FFT bin `j`, with the Nyquist bin mapped to `−M/2`.
    pub fn frequency(&self, j: usize) -> i64 {
        let m = self.m as i64;
        let j = j as i64;
        if j < m / 2 {
            j
        } else {
            j - m
        }
    }

    /// Spectral derivative `∂/∂x_axis` of periodic samples (Nyquist mode dropped).
    pub fn spectral_derivative(&self, values: &[C64], axis: usize) -> Vec<C64> {
        let m = self.m;
        let mut data = values.to_vec();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        let scale = 1.0 / m as f64;
        for_each_line(&mut data, m, axis, |line| {
            fwd.process(line);
            for (j, v) in line.iter_mut().enumerate() {
                let k = if j == m / 2 { 0 } else { self.frequency(j) };
                *v *= c64(0.0, k as f64 * scale);
            }
            inv.process(line);
        });
        data
    }
}

/// Applies `f` to every line of an `M³` array along `axis`.
fn for_each_line(data: &mut [C64], m: usize, axis: usize, mut f: impl FnMut(&mut [C64])) {
    let stride = match axis {
        0 => m * m,
        1 => m,
        _ => 1,
    };
    let mut line = vec![c64(0.0, 0.0); m];
    for a in 0..m {
        for b in 0..m {
            let base = match axis {
                0 => a * m + b,
                1 => a * m * m + b,
                _ => (a * m + b) * m,
            };
            for (t, v) in line.iter_mut().enumerate() {
                *v = data[base + t * stride];
            }
            f(&mut line);
            for (t, v) in line.iter().enumerate() {
                data[base + t * stride] = *v;
            }
        }
    }
}

/// In-place unnormalized 3-D DFT of an `M³` array with a prepared 1-D plan of length `M`.
pub(crate) fn fft3_in_place(data: &mut [C64], m: usize, plan: &dyn Fft<f64>) {
    for axis in 0..3 {
        for_each_line(data, m, axis, |line| plan.process(line));
    }
}

/// Fourier coefficients `c_k = M⁻³ Σ_x u(x) e^{−i(k,x)}` of samples on an `M³` grid,
/// returned in FFT bin order.
pub fn fft3_coefficients(values: &[C64], m: usize) -> Vec<C64> {
    let mut data = values.to_vec();
    let fwd: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(m);
    fft3_in_place(&mut data, m, fwd.as_ref());
    let scale = 1.0 / (m * m * m) as f64;
    data.iter_mut().for_each(|v| *v *= scale);
    data
}
