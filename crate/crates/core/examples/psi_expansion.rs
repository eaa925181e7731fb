//! The operation ψ in the λ-ring: its generating series, its expansion in γ-operations
//! and in exterior powers, and the identity `ch ψ(x) = Td x`, all in exact arithmetic.
//!
//! ```text
//! cargo run --example psi_expansion
//! ```

use ncindex::lambda_ring::{chern_psi_minus_todd, psi_in_exterior, psi_in_gamma, psi_series, verify_psi_multiplicative};

fn main() {
    let series = psi_series(8);
    println!("ψ series:");
    for k in 0..=8 {
        println!("  u^{k}: {}", series.coeff(k));
    }

    println!("\nψ(x) through degree 4 in γ-operations:\n  {}", psi_in_gamma(4));

    for dim in [3, 5] {
        println!("\nψ(E − n) for a bundle of dimension {dim}:\n  {}", psi_in_exterior(dim));
    }

    let defect = chern_psi_minus_todd(6);
    println!("\nch ψ − Td through degree 6: {} nonzero terms", defect.terms().len());

    let mult = verify_psi_multiplicative(4);
    println!(
        "multiplicativity defects {}, stability defects {}",
        mult.multiplicative_defects, mult.stability_defects
    );
}
