//! The torus example: the Dirac operator on `T³`, its positive spectral projection, the
//! cat-map shift on Fourier modes, truncated operator assembly, test maps, and the analytic
//! index through regularized parametrix traces.

mod analytic;
mod d1;
pub mod dirac;
mod example;
mod lattice;
mod multiplier;
pub mod test_maps;

pub use analytic::{analytic_index, richardson, AnalyticOptions, AnalyticReport, BoxTier, PartialSum};
pub use d1::{d1_margin, invertibility_probe_d1, D1Margin, D1Probe};
pub use dirac::{clifford, dirac_symbol, pauli, positive_spinor, spectral_projection, spectral_projection_xi};
pub use example::{example_symbols, ExampleSymbols};
pub use lattice::{assemble, LatticeOperator, LatticeWindow, SparseVec, Which};
pub use multiplier::{Mode, MultiplierF, MultiplierRecord};
pub use test_maps::{CollapseMap, LatticeDiracMap, NormalizedDirac, ProductField, ScalarMap, TestMapSpec};
