//! Symbols of shift operators as elements of the crossed product `C∞(S*T³) ⋊ ℤ`:
//! evaluators with jets, the twisted product, ellipticity certificates, trace extraction
//! and traces of form-valued products.

mod ellipticity;
pub mod eval;
mod forms;
mod phase;
mod symbol;

pub use ellipticity::{check_elliptic, random_unit_vector, EllipticityCertificate, SampleSet};
pub use eval::{build, Evaluator, Jet, PhaseFn, TorusField};
pub use forms::{trace_form_product, trace_maurer_cartan_power, Factor};
pub use phase::{full_frame, sphere_frame, PhasePoint, ShiftMap, Tangent, DIM};
pub use symbol::{
    deviation_from_identity, direct_sum, multiply, tau_component, two_term_isomorphism_margin, two_term_symbol,
    CrossedSymbol, TraceFn,
};
