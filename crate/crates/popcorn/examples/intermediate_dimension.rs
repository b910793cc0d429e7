//! Two-scale covers: the cost functional on both sides of its root and the
//! critical exponent against the closed-form intermediate dimension.
//!
//! Run with: cargo run --example intermediate_dimension

use popcorn_pyramids::covering::DyadicScale;
use popcorn_pyramids::dimensions::{
    critical_exponent, intermediate_dim_formula, two_scale_cover_cost,
};
use popcorn_pyramids::exact::{ratio_f64, ratio_u};
use popcorn_pyramids::sets::{SetSpec, Variant};

fn main() -> popcorn_pyramids::Result<()> {
    let spec = SetSpec::new(1, 1, 2, Variant::Graph)?;
    let theta = ratio_u(3, 4);
    let formula = intermediate_dim_formula(&spec, &theta)?;
    println!("theta = {theta}, closed form = {formula}");
    let target = ratio_f64(&formula);
    for j in [10u32, 12, 14] {
        let scale = DyadicScale::new(j)?;
        let low = two_scale_cover_cost(&spec, &theta, scale, target - 0.1)?;
        let high = two_scale_cover_cost(&spec, &theta, scale, target + 0.1)?;
        let root = critical_exponent(&spec, &theta, scale)?;
        println!(
            "j={j}: cost({:.2})={:.3}  cost({:.2})={:.3}  root={root:.4}  split=2^-{} fine=2^-{}",
            target - 0.1,
            low.cost,
            target + 0.1,
            high.cost,
            low.split_level,
            low.fine_level,
        );
    }
    Ok(())
}
