//! Per-layer diagnostics at one scale: denominator bands, exact measures,
//! Chung-Erdos floors and spatial cover counts, as CSV.
//!
//! Columns: k, l_low, l_high, sum_measure, pair_sum, ce_floor, cover_count.
//!
//! Run with: cargo run --example layer_diagnostics

use popcorn_pyramids::covering::{
    admissible_k_range, layer_cover_count, layer_denominators, DyadicScale,
};
use popcorn_pyramids::exact::ratio_u;
use popcorn_pyramids::measure::{chung_erdos_layer_floor, layer_measures};
use popcorn_pyramids::sets::{SetSpec, Variant};

fn main() -> popcorn_pyramids::Result<()> {
    let spec = SetSpec::new(1, 1, 2, Variant::Graph)?;
    let epsilon = ratio_u(1, 128);
    let scale = DyadicScale::new(10)?;
    let band = admissible_k_range(&spec, scale, &epsilon)?;
    eprintln!("# admissible band at 2^-10: [{}, {}]", band.k_min, band.k_max);
    println!("k,l_low,l_high,sum_measure,pair_sum,ce_floor,cover_count");
    for k in band.k_min..=band.k_max {
        let m = layer_measures(&spec, scale, k)?;
        let floor = chung_erdos_layer_floor(&spec, scale, k)?;
        let count = layer_cover_count(&spec, scale, k, u64::MAX)?;
        let (lo, hi) = layer_denominators(&spec, scale, k);
        println!("{k},{lo},{hi},{},{},{},{count}", m.sum, m.pair_sum, floor);
    }
    Ok(())
}
