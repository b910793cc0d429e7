//! Overlap measures of the Diophantine cell families against the
//! 4qk*delta^2 ceiling, exactly.
//!
//! Run with: cargo run --example duffin_schaeffer

use num::rational::BigRational;
use num::Zero;
use popcorn_pyramids::exact::{ratio_f64, ratio_u};
use popcorn_pyramids::measure::{
    duffin_schaeffer_bound, pair_intersection_measure, pair_intersection_measure_1d,
};

fn main() -> popcorn_pyramids::Result<()> {
    // a few overlapping and non-overlapping pairs
    for (q, k, e) in [(2u64, 3u64, 4u32), (2, 4, 2), (100, 200, 4), (30, 42, 6)] {
        let delta = ratio_u(1, 1 << e);
        let overlap = pair_intersection_measure_1d(q, k, &delta)?;
        let bound = duffin_schaeffer_bound(q, k, &delta, 2);
        println!(
            "q={q:<3} k={k:<3} delta=2^-{e}: overlap {overlap} <= bound {bound}"
        );
    }
    // tightest observed ratio over a small exact grid
    let mut worst = BigRational::zero();
    let mut at = (0u64, 0u64, 0u32);
    for q in 2u64..=60 {
        for k in q + 1..=60 {
            for e in [4u32, 6, 8] {
                let delta = ratio_u(1, 1 << e);
                let overlap = pair_intersection_measure_1d(q, k, &delta)?;
                let ratio = overlap / duffin_schaeffer_bound(q, k, &delta, 2);
                if ratio > worst {
                    worst = ratio;
                    at = (q, k, e);
                }
            }
        }
    }
    println!(
        "worst overlap/bound ratio on the grid: {:.4} at q={} k={} delta=2^-{}",
        ratio_f64(&worst),
        at.0,
        at.1,
        at.2
    );
    // the d-dimensional overlap is a power of the 1-d one
    let delta = ratio_u(1, 4);
    let d3 = pair_intersection_measure(2, 4, &delta, 3)?;
    println!("d=3 overlap for q=2, k=4, delta=1/4: {d3} (square of the 1-d value)");
    Ok(())
}
