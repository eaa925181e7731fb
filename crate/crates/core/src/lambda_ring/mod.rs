//! Exact λ-ring engine: symmetric functions over ℚ\[n\], multiplicative sequences,
//! γ-operations and the operation ψ solving `ch ψ(x) = Td x`.
//!
//! Everything here is exact rational arithmetic; no floating point is used.

mod lambda_expr;
mod psi;
mod rational_poly;
pub mod roots;
mod series;
mod symm;

pub use lambda_expr::{LambdaExpr, NCoefficient, TensorMonomial, TermRecord};
pub use psi::{
    check_cutoff, chern_of, chern_psi_minus_todd, gamma_expand, psi_in_exterior, psi_in_gamma,
    verify_psi_multiplicative, MultiplicativityReport,
};
pub use rational_poly::{rat, Rational, RationalPolyInN};
pub use series::{psi_closed_form, psi_series, todd_series, FormalSeries};
pub use symm::{
    elementary_in_power_sums, multiplicative_op, newton_convert, newton_invert,
    power_sums_in_elementary, todd_symmetric, Basis, Elementary, Gamma, GammaPoly, GradedPoly,
    Partition, PowerSum, PowerSumPoly, SymmPoly,
};
