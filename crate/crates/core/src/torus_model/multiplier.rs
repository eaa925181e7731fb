//! Matrix multipliers on `T³` given by finite Fourier tables.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::chern_numeric::grid::{fft3_coefficients, TorusGrid};
use crate::crossed_symbol::TorusField;
use crate::error::{Error, Result};
use crate::linalg::{c64, CMat, C64};

/// A Fourier mode `m ∈ ℤ³`.
pub type Mode = [i64; 3];

/// Bookkeeping recorded with a multiplier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierRecord {
    /// `max |m|_∞` over the stored coefficients.
    pub bandwidth: usize,
    /// Sampling grid used to compute the table (0 for exact tables).
    pub sampling_grid: usize,
    /// Max deviation between the table and the sampled field on an offset check grid
    /// (0 for exact tables).
    pub truncation_error: f64,
}

/// `f(x) = Σ_m F_m e^{i(m,x)}` with finitely many `N × N` coefficients.
#[derive(Clone, Debug)]
pub struct MultiplierF {
    rank: usize,
    coeffs: BTreeMap<Mode, CMat>,
    record: MultiplierRecord,
}

fn infinity_norm(m: &Mode) -> usize {
    m.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0)
}

impl MultiplierF {
    /// An exact table; zero coefficients are dropped.
    pub fn from_coefficients(rank: usize, coeffs: impl IntoIterator<Item = (Mode, CMat)>) -> Result<Self> {
        let mut map: BTreeMap<Mode, CMat> = BTreeMap::new();
        for (m, c) in coeffs {
            if c.nrows() != rank || c.ncols() != rank {
                return Err(Error::structural(format!(
                    "coefficient at {m:?} is {}×{}, expected {rank}×{rank}",
                    c.nrows(),
                    c.ncols()
                )));
            }
            let entry = map.entry(m).or_insert_with(|| CMat::zeros(rank, rank));
            *entry += c;
        }
        map.retain(|_, c| c.iter().any(|v| v.norm() > 0.0));
        let bandwidth = map.keys().map(infinity_norm).max().unwrap_or(0);
        Ok(Self {
            rank,
            coeffs: map,
            record: MultiplierRecord {
                bandwidth,
                sampling_grid: 0,
                truncation_error: 0.0,
            },
        })
    }

    /// The constant multiplier `c`.
    pub fn constant(c: CMat) -> Self {
        let rank = c.nrows();
        Self::from_coefficients(rank, [([0, 0, 0], c)]).expect("square constant")
    }

    /// Samples `field` on a grid of at least four times its bandwidth and keeps the Fourier
    /// coefficients with `|m|_∞ ≤ bandwidth`; the truncation error is measured on a
    /// half-cell-offset check grid.
    pub fn from_field(field: &dyn TorusField, bandwidth: usize) -> Result<Self> {
        let s = (4 * (2 * bandwidth + 1)).max(16);
        let s = s + s % 2;
        let rank = field.rank();
        let grid = TorusGrid::new(s)?;
        let samples: Vec<CMat> = grid.nodes().iter().map(|x| field.value(x)).collect();
        let table = sampled_table(&samples, rank, s, bandwidth);
        let mut out = Self::from_coefficients(rank, table)?;
        out.record.bandwidth = bandwidth;
        out.record.sampling_grid = s;
        let check = 9usize;
        let h = TAU / check as f64;
        let mut err: f64 = 0.0;
        for i in 0..check * check * check {
            let x = [
                ((i / (check * check)) as f64 + 0.5) * h,
                (((i / check) % check) as f64 + 0.5) * h,
                ((i % check) as f64 + 0.5) * h,
            ];
            let d = field.value(&x) - out.value(&x);
            err = err.max(d.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        out.record.truncation_error = err;
        Ok(out)
    }

    /// Matrix size `N`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `max |m|_∞` over nonzero coefficients.
    pub fn bandwidth(&self) -> usize {
        self.coeffs.keys().map(infinity_norm).max().unwrap_or(0)
    }

    /// Nonzero coefficients.
    pub fn coefficients(&self) -> &BTreeMap<Mode, CMat> {
        &self.coeffs
    }

    /// Coefficient at `m` (zero if absent).
    pub fn coefficient(&self, m: &Mode) -> CMat {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.rank, self.rank))
    }

    /// Construction record.
    pub fn record(&self) -> &MultiplierRecord {
        &self.record
    }

    /// The pointwise adjoint `f*`: coefficients `(F_{−m})†`.
    pub fn adjoint(&self) -> Self {
        Self {
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| ([-m[0], -m[1], -m[2]], c.adjoint()))
                .collect(),
            record: self.record.clone(),
        }
    }

    /// Truncated Fourier table of `f⁻¹` with `|m|_∞ ≤ bandwidth`, from samples on an `S³` grid.
    pub fn inverse_table(&self, bandwidth: usize, sampling: usize) -> Result<Self> {
        let grid = TorusGrid::new(sampling)?;
        let mut samples = Vec::with_capacity(grid.len());
        for x in grid.nodes() {
            let v = self.value(&x);
            let inv = v.try_inverse().ok_or_else(|| {
                Error::domain(format!("multiplier is singular at x = {x:?}"))
            })?;
            samples.push(inv);
        }
        let table = sampled_table(&samples, self.rank, sampling, bandwidth);
        let mut out = Self::from_coefficients(self.rank, table)?;
        out.record = MultiplierRecord {
            bandwidth,
            sampling_grid: sampling,
            truncation_error: f64::NAN,
        };
        Ok(out)
    }

    /// Minimum of `|det f|` over the nodes of a torus grid, with the offending node.
    pub fn min_abs_det(&self, grid: &TorusGrid) -> (f64, [f64; 3]) {
        let mut best = (f64::INFINITY, [0.0; 3]);
        for x in grid.nodes() {
            let d = self.value(&x).determinant().norm();
            if d < best.0 {
                best = (d, x);
            }
        }
        best
    }
}

fn sampled_table(samples: &[CMat], rank: usize, s: usize, bandwidth: usize) -> Vec<(Mode, CMat)> {
    let b = bandwidth as i64;
    let si = s as i64;
    let bin = |k: i64| k.rem_euclid(si) as usize;
    let mut entries: Vec<Vec<C64>> = Vec::with_capacity(rank * rank);
    for r in 0..rank {
        for c in 0..rank {
            let vals: Vec<C64> = samples.iter().map(|m| m[(r, c)]).collect();
            entries.push(fft3_coefficients(&vals, s));
        }
    }
    let mut out = Vec::new();
    for m0 in -b..=b {
        for m1 in -b..=b {
            for m2 in -b..=b {
                let idx = (bin(m0) * s + bin(m1)) * s + bin(m2);
                let coeff = CMat::from_fn(rank, rank, |r, c| entries[r * rank + c][idx]);
                out.push(([m0, m1, m2], coeff));
            }
        }
    }
    out
}

impl TorusField for MultiplierF {
    fn rank(&self) -> usize {
        self.rank
    }

    fn value(&self, x: &[f64; 3]) -> CMat {
        let mut acc = CMat::zeros(self.rank, self.rank);
        for (m, c) in &self.coeffs {
            let phase = m[0] as f64 * x[0] + m[1] as f64 * x[1] + m[2] as f64 * x[2];
            acc += c * c64(phase.cos(), phase.sin());
        }
        acc
    }

    fn gradient(&self, x: &[f64; 3]) -> [CMat; 3] {
        let mut out: [CMat; 3] = std::array::from_fn(|_| CMat::zeros(self.rank, self.rank));
        for (m, c) in &self.coeffs {
            let phase = m[0] as f64 * x[0] + m[1] as f64 * x[1] + m[2] as f64 * x[2];
            let e = c * c64(phase.cos(), phase.sin());
            for (j, slot) in out.iter_mut().enumerate() {
                if m[j] != 0 {
                    *slot += &e * c64(0.0, m[j] as f64);
                }
            }
        }
        out
    }
}
