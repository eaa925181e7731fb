//! Index theory for elliptic operators with shifts, made computable.
//!
//! The crate implements
//!
//! * [`crossed_symbol`] — symbols of shift operators as elements of the crossed
//!   product `C∞(S*T³) ⋊ ℤ`, their composition, ellipticity certificates and
//!   trace extraction;
//! * [`lambda_ring`] — an exact λ-ring engine that builds the operation ψ with
//!   `ch ψ(x) = Td x` and reproduces its closed forms;
//! * [`torus_model`] — the Dirac/cat-map example on the 3-torus: spectral
//!   projection, lattice assembly and the analytic index;
//! * [`chern_numeric`] — quadrature on `T³` and `S²`, Chern forms, the
//!   topological index integrals and an independent mapping-degree oracle;
//! * [`cli_reports`] — configuration, orchestration and report emission used by
//!   the `ncindex` binary.

pub mod chern_numeric;
pub mod cli_reports;
pub mod crossed_symbol;
pub mod error;
pub mod lambda_ring;
pub mod linalg;
pub mod torus_model;

pub use error::{Error, Result};
