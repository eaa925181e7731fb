//! Sparse assembly of `D = f·PTP + (1 − P)` and its relatives on the mode window
//! `|k|_∞ ≤ R`, with the `(row, col, re, im)` triplet export.
//!
//! ```text
//! cargo run --example lattice_export -- [radius] [output file]
//! ```

use std::path::PathBuf;

use ncindex::crossed_symbol::ShiftMap;
use ncindex::torus_model::{assemble, LatticeDiracMap, Which};

fn main() -> ncindex::Result<()> {
    let mut args = std::env::args().skip(1);
    let radius: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join(format!("ncindex_d_r{radius}.txt")));

    let shift = ShiftMap::cat();
    let f = LatticeDiracMap::for_degree(1)?.multiplier();
    for which in [Which::D, Which::D1, Which::P, Which::T] {
        let op = assemble(&f, radius, which, &shift)?;
        println!("{which:?}: dimension {}, {} nonzeros", op.dim(), op.nnz());
    }

    let d = assemble(&f, radius, Which::D, &shift)?;
    d.export_triplets(&out)?;
    println!("wrote the triplets of D to {}", out.display());
    Ok(())
}
