//! Chern characters of projections over the crossed product: the Bott integral
//! `∫_{S²} ch im p = 1`, and the pairing of a projection with a nontrivial shift component
//! with the flat cyclic cocycle of the sphere, normalized by `(2πi)⁻¹`, against the direct
//! integral of its Chern form.
//!
//! ```text
//! cargo run --example bott_pairing
//! ```

use std::f64::consts::PI;

use ncindex::chern_numeric::{flat_sphere_cochain, pairing_with_cocycle, rotated_bott_toy, sphere_chern_integral, SphereQuadrature};
use ncindex::crossed_symbol::{build, CrossedSymbol, ShiftMap};
use ncindex::linalg::c64;

fn main() -> ncindex::Result<()> {
    let quad = SphereQuadrature::gauss_product(20)?;
    let bott = CrossedSymbol::scalar_part(build::dirac_projection(1));
    let integral = sphere_chern_integral(&bott, &ShiftMap::identity(), [0.0; 3], &quad)?;
    println!("∫ ch of the Bott projection ({}): {:+.12}", quad.label(), integral.re);

    let (p, shift) = rotated_bott_toy()?;
    println!("toy projection supported at shifts {:?}", p.support());
    let direct = sphere_chern_integral(&p, &shift, [0.0; 3], &quad)?;
    let cocycle = [flat_sphere_cochain([0.0; 3], &quad)?];
    let pairing = pairing_with_cocycle(&p, &cocycle, &shift) / c64(0.0, 2.0 * PI);
    println!("∫ ch of the toy projection:        {:+.12}", direct.re);
    println!("(2πi)⁻¹ · pairing with φ₂:         {:+.12} ({:+.1e}i)", pairing.re, pairing.im);
    Ok(())
}
