//! Invertibility of `D₁ = PTP + (1 − P)`: the symbol-level margin on random sphere samples
//! and the smallest singular value on interior sub-windows of growing lattice windows.
//!
//! ```text
//! cargo run --release --example d1_invertibility
//! ```

use ncindex::crossed_symbol::{random_unit_vector, ShiftMap};
use ncindex::torus_model::{d1_margin, invertibility_probe_d1};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncindex::Result<()> {
    let shift = ShiftMap::cat();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<[f64; 3]> = (0..10_000).map(|_| random_unit_vector(&mut rng)).collect();
    let margin = d1_margin(&shift, &samples)?;
    println!(
        "symbol margin on {} samples: angle {:.4}, singular value {:.4}",
        margin.sample_count, margin.angle_margin, margin.min_singular_value
    );
    for radius in [6, 12, 18] {
        let probe = invertibility_probe_d1(radius, &shift)?;
        println!(
            "R = {radius:>2}: {} columns in {} blocks, smallest singular value {:.6}",
            probe.columns, probe.blocks, probe.smallest_singular_value
        );
    }
    Ok(())
}
