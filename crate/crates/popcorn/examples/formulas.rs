//! Closed-form dimension values across regimes, printed as exact rationals.
//!
//! Run with: cargo run --example formulas

use popcorn_pyramids::dimensions::{
    assouad_dim_formula, box_dim_formula, hausdorff_dim, intermediate_dim_formula,
    phase_transition,
};
use popcorn_pyramids::exact::ratio_u;
use popcorn_pyramids::sets::{SetSpec, Variant};

fn main() -> popcorn_pyramids::Result<()> {
    for (t_num, t_den, d) in [(1u64, 1u64, 2u32), (3, 10, 2), (1, 1, 3), (2, 1, 2), (3, 2, 3)] {
        let spec = SetSpec::new(t_num, t_den, d, Variant::Graph)?;
        let regime = if spec.is_subcritical() { "subcritical" } else { "collapsed" };
        println!("t = {}, d = {d} ({regime})", spec.t());
        println!("  hausdorff  = {}", hausdorff_dim(&spec));
        println!("  box        = {}", box_dim_formula(&spec));
        println!("  assouad    = {}", assouad_dim_formula(&spec));
        println!("  transition = {}", phase_transition(&spec));
        print!("  profile    =");
        for i in [0u64, 2, 4, 6, 8, 10] {
            let theta = ratio_u(i, 10);
            print!(" {}@{}", intermediate_dim_formula(&spec, &theta)?, theta);
        }
        println!();
    }
    Ok(())
}
