//! Symbols of shift operators as elements of the crossed product: composition, the
//! ellipticity certificate of `σ(D)` with its inverse `σ(B)`, and what a wrong candidate
//! inverse looks like.
//!
//! ```text
//! cargo run --example symbol_calculus
//! ```

use std::sync::Arc;

use ncindex::crossed_symbol::{check_elliptic, multiply, PhasePoint, SampleSet, ShiftMap};
use ncindex::torus_model::{example_symbols, LatticeDiracMap};

fn main() -> ncindex::Result<()> {
    let shift = Arc::new(ShiftMap::cat());
    let f = Arc::new(LatticeDiracMap::for_degree(1)?);
    let ex = example_symbols(f, shift.clone())?;

    println!("σ(D) is supported at shifts {:?}", ex.sigma_d.support());
    println!("σ(B) is supported at shifts {:?}", ex.sigma_b.support());

    // σ(D) = σ₀ σ₁ in the crossed product.
    let product = multiply(&ex.sigma0, &ex.sigma1, &shift)?;
    let z = PhasePoint::new([0.4, 2.0, 5.1], [0.3, -0.8, 0.5])?;
    let lhs = ex.sigma_d.eval(&z);
    let rhs = product.eval(&z);
    let gap: f64 = lhs
        .iter()
        .map(|(k, m)| (m - rhs.get(k).expect("same support")).norm())
        .fold(0.0, f64::max);
    println!("max |σ(D) − σ₀σ₁| at a sample point: {gap:.2e}");

    let samples = SampleSet::random(2000, 7);
    let cert = check_elliptic(&ex.sigma_d, &ex.sigma_b, &shift, &samples)?;
    println!(
        "certificate of (σ(D), σ(B)) on {}: residual {:.2e}, min singular value ≥ {:.3}",
        cert.samples, cert.residual, cert.min_singular_value
    );

    let wrong = check_elliptic(&ex.sigma_d, &ex.sigma1_inv, &shift, &samples)?;
    println!("with σ₁⁻¹ as a (wrong) inverse: residual {:.3}", wrong.residual);
    Ok(())
}
