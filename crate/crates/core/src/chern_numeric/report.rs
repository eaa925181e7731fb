//! Near-integer reporting of index estimates.

use serde::{Deserialize, Serialize};

/// A real estimate of an integer quantity with its nearest integer and gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub nearest_integer: i64,
    pub gap: f64,
}

impl Estimate {
    /// Rounds `value` and records `|value − round(value)|` (NaN stays NaN).
    pub fn new(value: f64) -> Self {
        let nearest = value.round();
        Self {
            value,
            nearest_integer: if nearest.is_finite() { nearest as i64 } else { 0 },
            gap: (value - nearest).abs(),
        }
    }

    /// True when the estimate rounds to `target` with gap below `tol`.
    pub fn agrees_with(&self, target: i64, tol: f64) -> bool {
        self.nearest_integer == target && self.gap < tol
    }
}

/// The analytic and topological sides of the index theorem for one test map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    /// Analytic index (extrapolated parametrix trace).
    pub analytic_estimate: f64,
    /// Topological index `1/((2πi)²3!) ∫ tr(f⁻¹df)³`.
    pub topological_estimate: f64,
    /// Nearest integer to the topological estimate.
    pub nearest_integer: i64,
    /// `|analytic_estimate − nearest_integer|`.
    pub analytic_gap: f64,
    /// `|topological_estimate − nearest_integer|`.
    pub topological_gap: f64,
    /// Window radii of the analytic sweep.
    pub window_radii: Vec<usize>,
    /// Trace power `m`.
    pub trace_power: usize,
    /// Torus grid resolution of the topological integral.
    pub grid_resolution: usize,
}

impl IndexReport {
    /// Assembles a report; the nearest integer is taken from the topological side.
    pub fn new(
        analytic: f64,
        topological: f64,
        window_radii: Vec<usize>,
        trace_power: usize,
        grid_resolution: usize,
    ) -> Self {
        let top = Estimate::new(topological);
        Self {
            analytic_estimate: analytic,
            topological_estimate: topological,
            nearest_integer: top.nearest_integer,
            analytic_gap: (analytic - top.nearest_integer as f64).abs(),
            topological_gap: top.gap,
            window_radii,
            trace_power,
            grid_resolution,
        }
    }
}
