//! Truncated Fourier lattice `{k ∈ ℤ³ : |k|_∞ ≤ R} ⊗ ℂ² ⊗ ℂ^N` and sparse operators on it.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::dirac::spectral_projection;
use super::multiplier::{Mode, MultiplierF};
use crate::crossed_symbol::ShiftMap;
use crate::error::{Error, Result};
use crate::linalg::{c64, C64};

/// Index bookkeeping for the window `|k|_∞ ≤ R` with spinor and coefficient factors.
///
/// Flat index of `(mode, s, a)` is `(mode_index · 2 + s) · N + a` (spinor ⊗ coefficient).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeWindow {
    pub radius: usize,
    pub rank: usize,
}

impl LatticeWindow {
    /// Window of radius `R` for coefficient rank `N`.
    pub fn new(radius: usize, rank: usize) -> Self {
        Self { radius, rank }
    }

    /// Side length `2R + 1`.
    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    /// Number of modes `(2R + 1)³`.
    pub fn modes(&self) -> usize {
        self.side().pow(3)
    }

    /// Total dimension `(2R + 1)³ · 2N`.
    pub fn dim(&self) -> usize {
        self.modes() * 2 * self.rank
    }

    /// Position of a mode in the window, if inside.
    pub fn mode_index(&self, k: &Mode) -> Option<usize> {
        let r = self.radius as i64;
        if k.iter().any(|v| v.abs() > r) {
            return None;
        }
        let s = self.side() as i64;
        Some((((k[0] + r) * s + (k[1] + r)) * s + (k[2] + r)) as usize)
    }

    /// The mode at a window position.
    pub fn mode(&self, idx: usize) -> Mode {
        let s = self.side();
        let r = self.radius as i64;
        [
            (idx / (s * s)) as i64 - r,
            ((idx / s) % s) as i64 - r,
            (idx % s) as i64 - r,
        ]
    }

    /// Flat index of `(mode position, spinor s, coefficient a)`.
    pub fn flat(&self, mode_idx: usize, s: usize, a: usize) -> usize {
        (mode_idx * 2 + s) * self.rank + a
    }

    /// Inverse of [`Self::flat`].
    pub fn unflat(&self, i: usize) -> (usize, usize, usize) {
        let a = i % self.rank;
        let rest = i / self.rank;
        (rest / 2, rest % 2, a)
    }
}

/// A sparse vector on the lattice.
pub type SparseVec = BTreeMap<usize, C64>;

/// Which operator to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    /// `D = f·PTP + (1 − P)`.
    D,
    /// `D₀ = fP + (1 − P)`.
    D0,
    /// `D₁ = PTP + (1 − P)`.
    D1,
    /// The spectral projection `P`.
    P,
    /// The compressed shift `T`.
    T,
}

/// A sparse complex operator on a lattice window, stored in compressed-row form.
#[derive(Clone, Debug)]
pub struct LatticeOperator {
    window: LatticeWindow,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl LatticeOperator {
    /// Builds from `(row, col, value)` triplets; duplicates are summed and exact zeros dropped.
    pub fn from_triplets(window: LatticeWindow, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let n = window.dim();
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            if let (Some(&lr), Some(&lc)) = (rows.last(), col_idx.last()) {
                if lr == r && lc == c {
                    *values.last_mut().expect("nonempty") += v;
                    continue;
                }
            }
            rows.push(r);
            col_idx.push(c);
            values.push(v);
        }
        let keep: Vec<bool> = values.iter().map(|v| v.norm() != 0.0).collect();
        let mut k_rows = Vec::new();
        let mut k_cols = Vec::new();
        let mut k_vals = Vec::new();
        for i in 0..values.len() {
            if keep[i] {
                k_rows.push(rows[i]);
                k_cols.push(col_idx[i]);
                k_vals.push(values[i]);
            }
        }
        for &r in &k_rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            window,
            row_ptr,
            col_idx: k_cols,
            values: k_vals,
        }
    }

    /// The window this operator acts on.
    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    /// Number of stored nonzeros.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// All entries as `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for r in 0..self.dim() {
            for i in self.row_ptr[r]..self.row_ptr[r + 1] {
                out.push((r, self.col_idx[i], self.values[i]));
            }
        }
        out
    }

    /// Entry `(r, c)` (zero if not stored).
    pub fn get(&self, r: usize, c: usize) -> C64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[range.clone()].binary_search(&c) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => c64(0.0, 0.0),
        }
    }

    /// `y = A x` for a dense vector.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        (0..self.dim())
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|i| self.values[i] * x[self.col_idx[i]])
                    .sum()
            })
            .collect()
    }

    /// Writes the sparse-triplet text format: a header `# rows cols nnz`, then one
    /// `row col re im` line per stored entry (0-based indices, row-major order).
    pub fn write_triplets<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# {} {} {}", self.dim(), self.dim(), self.nnz())?;
        for (r, c, v) in self.triplets() {
            writeln!(out, "{r} {c} {:e} {:e}", v.re, v.im)?;
        }
        Ok(())
    }

    /// Writes the triplet format to a file.
    pub fn export_triplets(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_triplets(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }
}

/// Column-wise building blocks acting on sparse vectors.
pub(crate) struct LatticeOps<'a> {
    pub window: LatticeWindow,
    pub shift: &'a ShiftMap,
    pub f: Option<&'a MultiplierF>,
}

impl LatticeOps<'_> {
    fn apply_p(&self, v: &SparseVec, complement: bool) -> SparseVec {
        let w = self.window;
        let mut by_mode: BTreeMap<usize, Vec<(usize, usize, C64)>> = BTreeMap::new();
        for (&i, &val) in v {
            let (m, s, a) = w.unflat(i);
            by_mode.entry(m).or_default().push((s, a, val));
        }
        let mut out = SparseVec::new();
        for (m, entries) in by_mode {
            let p = spectral_projection(w.mode(m));
            for (s, a, val) in entries {
                for t in 0..2 {
                    let mut coeff = p[(t, s)];
                    if complement {
                        coeff = if t == s { c64(1.0, 0.0) - coeff } else { -coeff };
                    }
                    if coeff.norm() != 0.0 {
                        *out.entry(w.flat(m, t, a)).or_insert(c64(0.0, 0.0)) += coeff * val;
                    }
                }
            }
        }
        out
    }

    fn apply_t(&self, v: &SparseVec) -> SparseVec {
        let w = self.window;
        let mut out = SparseVec::new();
        for (&i, &val) in v {
            let (m, s, a) = w.unflat(i);
            if let Some(target) = w.mode_index(&self.shift.act_on_mode(w.mode(m))) {
                *out.entry(w.flat(target, s, a)).or_insert(c64(0.0, 0.0)) += val;
            }
        }
        out
    }

    fn apply_f(&self, v: &SparseVec) -> SparseVec {
        let w = self.window;
        let f = self.f.expect("multiplier required");
        let mut out = SparseVec::new();
        for (&i, &val) in v {
            let (m, s, a) = w.unflat(i);
            let k = w.mode(m);
            for (shift, coeff) in f.coefficients() {
                let target = [k[0] + shift[0], k[1] + shift[1], k[2] + shift[2]];
                if let Some(t) = w.mode_index(&target) {
                    for b in 0..w.rank {
                        let c = coeff[(b, a)];
                        if c.norm() != 0.0 {
                            *out.entry(w.flat(t, s, b)).or_insert(c64(0.0, 0.0)) += c * val;
                        }
                    }
                }
            }
        }
        out
    }

    fn column(&self, which: Which, j: usize) -> SparseVec {
        let mut e = SparseVec::new();
        e.insert(j, c64(1.0, 0.0));
        let add = |mut a: SparseVec, b: SparseVec| {
            for (i, v) in b {
                *a.entry(i).or_insert(c64(0.0, 0.0)) += v;
            }
            a
        };
        match which {
            Which::P => self.apply_p(&e, false),
            Which::T => self.apply_t(&e),
            Which::D0 => add(self.apply_f(&self.apply_p(&e, false)), self.apply_p(&e, true)),
            Which::D1 => add(
                self.apply_p(&self.apply_t(&self.apply_p(&e, false)), false),
                self.apply_p(&e, true),
            ),
            Which::D => add(
                self.apply_f(&self.apply_p(&self.apply_t(&self.apply_p(&e, false)), false)),
                self.apply_p(&e, true),
            ),
        }
    }
}

/// Assembles `D`, `D₀`, `D₁`, `P` or `T` on the window of radius `R`.
///
/// `T` maps the mode `k` to `Aᵀk` and is compressed to the window (modes leaving it are
/// dropped); `f` acts by convolution with its coefficient table on the coefficient factor.
pub fn assemble(f: &MultiplierF, radius: usize, which: Which, shift: &ShiftMap) -> Result<LatticeOperator> {
    if radius < f.bandwidth() {
        return Err(Error::precondition(format!(
            "window radius {radius} is smaller than the multiplier bandwidth {}",
            f.bandwidth()
        )));
    }
    let window = LatticeWindow::new(radius, f.rank());
    let ops = LatticeOps {
        window,
        shift,
        f: Some(f),
    };
    let mut triplets = Vec::new();
    for j in 0..window.dim() {
        for (i, v) in ops.column(which, j) {
            triplets.push((i, j, v));
        }
    }
    Ok(LatticeOperator::from_triplets(window, triplets))
}

/// Sparse columns of `D₁ = PTP + (1 − P)` (coefficient rank 1) for the given modes.
pub(crate) fn d1_columns(window: LatticeWindow, shift: &ShiftMap, modes: &[usize]) -> Vec<SparseVec> {
    let ops = LatticeOps {
        window,
        shift,
        f: None,
    };
    let mut cols = Vec::with_capacity(modes.len() * 2 * window.rank);
    for &m in modes {
        for s in 0..2 {
            for a in 0..window.rank {
                cols.push(ops.column(Which::D1, window.flat(m, s, a)));
            }
        }
    }
    cols
}
