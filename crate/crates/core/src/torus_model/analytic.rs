//! The analytic index of `D = f·PTP + (1 − P)` through regularized parametrix traces.
//!
//! `D₁ = PTP + (1 − P)` is invertible, so `ind D = ind D₀ = ind T_f` with `T_f = PfP` on
//! `im P`. With the parametrix `T_{f⁻¹}`,
//!
//! `ind T_f = Tr (P − T_{f⁻¹}T_f)^m − Tr (P − T_f T_{f⁻¹})^m`,
//!
//! where `P − T_{f⁻¹}T_f = P f⁻¹ (1 − P) f P =: Q₁` and `P − T_f T_{f⁻¹} = P f (1 − P) f⁻¹ P =: Q₂`.
//! Both have order −1, so their `m`-th powers are trace class on `T³` for `m ≥ 4`.
//!
//! The trace is the sum over Fourier modes `k ≠ 0` of the diagonal entries
//! `Σ_a ⟨(Q*)^{⌊m/2⌋} v, Q^{⌈m/2⌉} v⟩` with `v = u_k ⊗ e_a` spanning `im p(k)`. Each entry is
//! computed on a periodic box of modes centred at `k`: multiplication by `f` and by the exact
//! pointwise inverse `f⁻¹` is done by FFT on the box, `P` is applied with the true mode labels,
//! and the only approximation is the wrap-around of the exponentially decaying tails. The trace
//! is the partial sum over the window `|k|_∞ ≤ R`, extrapolated in `R`.

use std::f64::consts::TAU;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::dirac::positive_spinor;
use super::multiplier::{Mode, MultiplierF};
use crate::chern_numeric::grid::fft3_in_place;
use crate::crossed_symbol::TorusField;
use crate::error::{Error, Result};
use crate::linalg::{c64, pairwise_sum_c, C64};

/// Box side used for modes up to a given radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxTier {
    /// Applies to modes with `|k|_∞ ≤ up_to`.
    pub up_to: usize,
    /// Side of the periodic mode box (even, at least 4).
    pub side: usize,
}

/// Parameters of [`analytic_index`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticOptions {
    /// Trace power `m` (at least 4).
    pub power: usize,
    /// Window radii of the sweep, strictly increasing; the last one is the main window.
    pub radii: Vec<usize>,
    /// Box sides by mode radius; modes beyond every tier use the last one.
    pub box_tiers: Vec<BoxTier>,
    /// Decay exponent `α` of the window error `c·R^{−α}` used for extrapolation.
    pub richardson_exponent: f64,
    /// Outer-shell contribution above which the window is flagged as too small.
    pub tail_threshold: f64,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        Self {
            power: 4,
            radii: vec![8, 12, 16],
            box_tiers: vec![
                BoxTier { up_to: 4, side: 16 },
                BoxTier { up_to: 8, side: 12 },
                BoxTier {
                    up_to: usize::MAX,
                    side: 4,
                },
            ],
            richardson_exponent: 5.0,
            tail_threshold: 0.4,
        }
    }
}

/// The trace difference summed over `|k|_∞ ≤ radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    pub radius: usize,
    pub value: f64,
    pub imaginary: f64,
}

/// Result of [`analytic_index`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticReport {
    /// Extrapolated estimate (the largest-window partial sum if only one radius is given).
    pub value: f64,
    /// Nearest integer to `value`.
    pub nearest_integer: i64,
    /// `|value − nearest_integer|`.
    pub gap: f64,
    /// Partial sums for every radius of the sweep.
    pub partial_sums: Vec<PartialSum>,
    /// Contribution of the outer shell `|k|_∞ = R` of the largest window.
    pub tail: f64,
    /// Set when `|tail|` exceeds the configured threshold.
    pub window_too_small: bool,
    /// Largest imaginary part among the partial sums.
    pub imaginary: f64,
    /// Decay exponent used for extrapolation.
    pub richardson_exponent: f64,
    /// Decay exponent fitted from the last three partial sums, when available.
    pub fitted_exponent: Option<f64>,
    /// Trace power `m`.
    pub power: usize,
}

/// Pointwise samples of `f`, `f⁻¹` and their adjoints on the nodes of an `S³` grid,
/// with the FFT plans for that side.
struct BoxContext {
    side: usize,
    rank: usize,
    f: Vec<C64>,
    f_adj: Vec<C64>,
    g: Vec<C64>,
    g_adj: Vec<C64>,
    synthesis: Arc<dyn Fft<f64>>,
    analysis: Arc<dyn Fft<f64>>,
}

impl BoxContext {
    fn new(f: &MultiplierF, side: usize) -> Result<Self> {
        if side < 4 || side % 2 != 0 {
            return Err(Error::precondition(format!(
                "box side must be even and at least 4, got {side}"
            )));
        }
        let len = side.pow(3);
        let n = f.rank();
        let mut ctx = Self {
            side,
            rank: n,
            f: Vec::with_capacity(len * n * n),
            f_adj: Vec::with_capacity(len * n * n),
            g: Vec::with_capacity(len * n * n),
            g_adj: Vec::with_capacity(len * n * n),
            synthesis: FftPlanner::new().plan_fft_inverse(side),
            analysis: FftPlanner::new().plan_fft_forward(side),
        };
        let h = TAU / side as f64;
        for idx in 0..len {
            let x = [
                (idx / (side * side)) as f64 * h,
                ((idx / side) % side) as f64 * h,
                (idx % side) as f64 * h,
            ];
            let v = f.value(&x);
            let inv = v.clone().try_inverse().ok_or_else(|| {
                Error::domain(format!("multiplier is singular at x = {x:?}"))
            })?;
            for r in 0..n {
                for c in 0..n {
                    ctx.f.push(v[(r, c)]);
                    ctx.f_adj.push(v[(c, r)].conj());
                    ctx.g.push(inv[(r, c)]);
                    ctx.g_adj.push(inv[(c, r)].conj());
                }
            }
        }
        Ok(ctx)
    }

    fn len(&self) -> usize {
        self.side.pow(3)
    }

    /// Offset of box position `j` along one axis, in `[−S/2, S/2)`.
    fn offset(&self, j: usize) -> i64 {
        let s = self.side as i64;
        let j = j as i64;
        if j < s / 2 {
            j
        } else {
            j - s
        }
    }

    /// The mode carried by box position `idx` of the box centred at `k`.
    fn mode(&self, k: Mode, idx: usize) -> Mode {
        let s = self.side;
        [
            k[0] + self.offset(idx / (s * s)),
            k[1] + self.offset((idx / s) % s),
            k[2] + self.offset(idx % s),
        ]
    }
}

/// Which sampled matrix field to multiply by.
#[derive(Clone, Copy)]
enum Field {
    F,
    FAdj,
    G,
    GAdj,
}

/// A vector on the periodic box: component `s·N + a` is an `S³` array of mode amplitudes.
type BoxVec = Vec<Vec<C64>>;

/// Multiplies by a matrix field acting on the coefficient factor (cyclic convolution on the box).
fn multiply(ctx: &BoxContext, field: Field, v: &mut BoxVec) {
    let n = ctx.rank;
    let values = match field {
        Field::F => &ctx.f,
        Field::FAdj => &ctx.f_adj,
        Field::G => &ctx.g,
        Field::GAdj => &ctx.g_adj,
    };
    for comp in v.iter_mut() {
        fft3_in_place(comp, ctx.side, ctx.synthesis.as_ref());
    }
    let scale = 1.0 / ctx.len() as f64;
    let mut tmp = vec![c64(0.0, 0.0); n];
    for node in 0..ctx.len() {
        let m = &values[node * n * n..(node + 1) * n * n];
        for s in 0..2 {
            for (b, t) in tmp.iter_mut().enumerate() {
                *t = (0..n).map(|a| m[b * n + a] * v[s * n + a][node]).sum::<C64>() * scale;
            }
            for (b, t) in tmp.iter().enumerate() {
                v[s * n + b][node] = *t;
            }
        }
    }
    for comp in v.iter_mut() {
        fft3_in_place(comp, ctx.side, ctx.analysis.as_ref());
    }
}

/// Applies `P` (or `1 − P`) with the true mode labels of the box centred at `k`.
fn project(ctx: &BoxContext, k: Mode, v: &mut BoxVec, complement: bool) {
    let n = ctx.rank;
    for idx in 0..ctx.len() {
        let mode = ctx.mode(k, idx);
        let p = projection(mode);
        for a in 0..n {
            let (u0, u1) = (v[a][idx], v[n + a][idx]);
            let (mut w0, mut w1) = match p {
                Some(p) => (p[0][0] * u0 + p[0][1] * u1, p[1][0] * u0 + p[1][1] * u1),
                None => (c64(0.0, 0.0), c64(0.0, 0.0)),
            };
            if complement {
                w0 = u0 - w0;
                w1 = u1 - w1;
            }
            v[a][idx] = w0;
            v[n + a][idx] = w1;
        }
    }
}

/// `p(k)` as a 2×2 array; `None` at `k = 0` where the projection vanishes.
fn projection(k: Mode) -> Option<[[C64; 2]; 2]> {
    if k == [0, 0, 0] {
        return None;
    }
    let n = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
    let (x, y, z) = (k[0] as f64 / n, k[1] as f64 / n, k[2] as f64 / n);
    Some([
        [c64(0.5 * (1.0 + z), 0.0), c64(0.5 * x, -0.5 * y)],
        [c64(0.5 * x, 0.5 * y), c64(0.5 * (1.0 - z), 0.0)],
    ])
}

/// `v ↦ P · outer · (1 − P) · inner · v` for `v ∈ im P`.
fn remainder_step(ctx: &BoxContext, k: Mode, v: &mut BoxVec, inner: Field, outer: Field) {
    multiply(ctx, inner, v);
    project(ctx, k, v, true);
    multiply(ctx, outer, v);
    project(ctx, k, v, false);
}

/// `Σ_a ⟨(Q*)^{⌊m/2⌋} v_a, Q^{⌈m/2⌉} v_a⟩` with `Q = P·outer·(1−P)·inner·P`.
fn diagonal_entry(ctx: &BoxContext, k: Mode, power: usize, q: (Field, Field), q_adj: (Field, Field)) -> C64 {
    let n = ctx.rank;
    let norm = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
    let xi = nalgebra::Vector3::new(k[0] as f64 / norm, k[1] as f64 / norm, k[2] as f64 / norm);
    let u = positive_spinor(&xi);
    let mut total = c64(0.0, 0.0);
    for a in 0..n {
        let mut v: BoxVec = vec![vec![c64(0.0, 0.0); ctx.len()]; 2 * n];
        v[a][0] = u[0];
        v[n + a][0] = u[1];
        let mut right = v.clone();
        for _ in 0..power.div_ceil(2) {
            remainder_step(ctx, k, &mut right, q.0, q.1);
        }
        let mut left = v;
        for _ in 0..power / 2 {
            remainder_step(ctx, k, &mut left, q_adj.0, q_adj.1);
        }
        for (l, r) in left.iter().zip(&right) {
            total += l.iter().zip(r).map(|(x, y)| x.conj() * y).sum::<C64>();
        }
    }
    total
}

/// `tr Q₁^m(k) − tr Q₂^m(k)`.
fn mode_contribution(ctx: &BoxContext, k: Mode, power: usize) -> C64 {
    // Q₁ = P G (1−P) F P, Q₁* = P F* (1−P) G* P; Q₂ = P F (1−P) G P, Q₂* = P G* (1−P) F* P.
    let q1 = diagonal_entry(ctx, k, power, (Field::F, Field::G), (Field::GAdj, Field::FAdj));
    let q2 = diagonal_entry(ctx, k, power, (Field::G, Field::F), (Field::FAdj, Field::GAdj));
    q1 - q2
}

fn sup_norm(k: &Mode) -> usize {
    k.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0)
}

/// `Tr Q₁^m − Tr Q₂^m` over a sweep of windows, with extrapolation and diagnostics.
pub fn analytic_index(f: &MultiplierF, options: &AnalyticOptions) -> Result<AnalyticReport> {
    let m = options.power;
    if m < 4 {
        return Err(Error::precondition(format!(
            "trace power must be at least 4 for trace-class remainders on T³, got {m}"
        )));
    }
    if options.radii.is_empty() || options.radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::precondition(
            "window radii must be a nonempty strictly increasing list",
        ));
    }
    if options.box_tiers.is_empty() {
        return Err(Error::precondition("at least one box tier is required"));
    }
    let bandwidth = f.bandwidth().max(1);
    let r_min = options.radii[0];
    if r_min < m * bandwidth {
        return Err(Error::precondition(format!(
            "window radius {r_min} is below m·bandwidth = {}",
            m * bandwidth
        )));
    }
    let contexts: Vec<(usize, BoxContext)> = options
        .box_tiers
        .iter()
        .map(|t| Ok((t.up_to, BoxContext::new(f, t.side)?)))
        .collect::<Result<_>>()?;
    let context_for = |k: &Mode| {
        let r = sup_norm(k);
        &contexts
            .iter()
            .find(|(up_to, _)| r <= *up_to)
            .unwrap_or_else(|| contexts.last().expect("nonempty tiers"))
            .1
    };

    let r_max = *options.radii.last().expect("nonempty radii") as i64;
    let modes: Vec<Mode> = (-r_max..=r_max)
        .flat_map(|a| (-r_max..=r_max).flat_map(move |b| (-r_max..=r_max).map(move |c| [a, b, c])))
        .filter(|k| *k != [0, 0, 0])
        .collect();
    let contributions: Vec<C64> = modes
        .par_iter()
        .map(|k| mode_contribution(context_for(k), *k, m))
        .collect();

    let sum_within = |pred: &dyn Fn(usize) -> bool| {
        let picked: Vec<C64> = modes
            .iter()
            .zip(&contributions)
            .filter(|(k, _)| pred(sup_norm(k)))
            .map(|(_, v)| *v)
            .collect();
        pairwise_sum_c(&picked)
    };
    let partial_sums: Vec<PartialSum> = options
        .radii
        .iter()
        .map(|&r| {
            let s = sum_within(&|n| n <= r);
            PartialSum {
                radius: r,
                value: s.re,
                imaginary: s.im,
            }
        })
        .collect();
    let tail = sum_within(&|n| n == r_max as usize).re;
    let alpha = options.richardson_exponent;
    let value = match partial_sums.len() {
        1 => partial_sums[0].value,
        n => richardson(&partial_sums[n - 2], &partial_sums[n - 1], alpha),
    };
    let fitted_exponent = if partial_sums.len() >= 3 {
        fit_exponent(&partial_sums[partial_sums.len() - 3..])
    } else {
        None
    };
    let nearest = value.round();
    Ok(AnalyticReport {
        value,
        nearest_integer: nearest as i64,
        gap: (value - nearest).abs(),
        imaginary: partial_sums.iter().map(|p| p.imaginary.abs()).fold(0.0, f64::max),
        partial_sums,
        tail,
        window_too_small: !(tail.abs() <= options.tail_threshold),
        richardson_exponent: alpha,
        fitted_exponent,
        power: m,
    })
}

/// Eliminates `c·R^{−α}` from two partial sums.
pub fn richardson(a: &PartialSum, b: &PartialSum, alpha: f64) -> f64 {
    let wa = (a.radius as f64).powf(alpha);
    let wb = (b.radius as f64).powf(alpha);
    (wb * b.value - wa * a.value) / (wb - wa)
}

/// Solves `(I₂ − I₁)/(I₃ − I₂) = (R₁^{−α} − R₂^{−α})/(R₂^{−α} − R₃^{−α})` for `α` by bisection.
fn fit_exponent(sums: &[PartialSum]) -> Option<f64> {
    let (r1, r2, r3) = (
        sums[0].radius as f64,
        sums[1].radius as f64,
        sums[2].radius as f64,
    );
    let d12 = sums[1].value - sums[0].value;
    let d23 = sums[2].value - sums[1].value;
    if d23 == 0.0 || d12 == 0.0 || d12.signum() != d23.signum() {
        return None;
    }
    let target = d12 / d23;
    let ratio = |a: f64| (r1.powf(-a) - r2.powf(-a)) / (r2.powf(-a) - r3.powf(-a));
    let (mut lo, mut hi) = (0.05, 40.0);
    if !((ratio(lo) - target) * (ratio(hi) - target) < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (ratio(lo) - target) * (ratio(mid) - target) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
