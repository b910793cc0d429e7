//! Localized window counts N_r([x, x+R] ∩ F) and the worst observed scaling
//! exponent, in both regimes.
//!
//! Run with: cargo run --example assouad_probes

use popcorn_pyramids::covering::localized_cover_count;
use popcorn_pyramids::dimensions::{assouad_dim_formula, assouad_probe_max};
use popcorn_pyramids::exact::{ratio_int, ratio_u};
use popcorn_pyramids::sets::{SetSpec, Variant};

fn main() -> popcorn_pyramids::Result<()> {
    // a single window by hand: corner at (1/2, 1/2), R = 1/4, r = 1/16
    let spec = SetSpec::new(1, 1, 2, Variant::Graph)?;
    let corner = vec![ratio_u(1, 2), ratio_u(1, 2)];
    let n = localized_cover_count(&spec, &corner, 2, 4, u64::MAX)?;
    println!("window [1/2,3/4]^2 at r=1/16 contains {n} occupied cells");
    // full-cube consistency with the global mesh
    let origin = vec![ratio_int(0), ratio_int(0)];
    let full = localized_cover_count(&spec, &origin, 0, 6, u64::MAX)?;
    println!("origin window with R=1, r=2^-6: {full} cells (the global cover count)");

    // seeded probes in both regimes; the collapsed one must stay near d-1
    for (t, variant) in [(1u64, Variant::Graph), (3, Variant::Full)] {
        let spec = SetSpec::new(t, 1, 2, variant)?;
        let report = assouad_probe_max(&spec, 3, &[4, 6], 64, 16, 0, u64::MAX)?;
        println!(
            "t={t}: max log2(N_r)/log2(R/r) over {} probes = {:.4} (closed form {})",
            report.probes,
            report.max_ratio,
            assouad_dim_formula(&spec)
        );
    }
    Ok(())
}
