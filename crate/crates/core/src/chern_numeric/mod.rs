//! Numerical Chern–Weil and topological-index evaluation: quadrature on `T³` and `S²`,
//! spectral differentiation, the Chern character form of a projection, the odd index
//! integral, the cosphere-bundle index formula and pairings with cyclic cocycles.

mod chern_form;
pub mod grid;
mod nice;
mod pairing;
mod report;
mod sphere;
mod topological;

pub use chern_form::{ch_flat_projection, idempotency_defect, sphere_chern_integral, ChernForm};
pub use grid::{fft3_coefficients, TorusGrid};
pub use nice::{nice_index, NiceIndexReport};
pub use pairing::{flat_sphere_cochain, pairing_with_cocycle, rotated_bott_toy, Cochain, FlatNode};
pub use report::{Estimate, IndexReport};
pub use sphere::SphereQuadrature;
pub use topological::{degree_oracle, topological_index_f, DegreeReport, TopologicalReport, MIN_ABS_DET, ORIENTATION_SIGN};
