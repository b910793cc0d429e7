//! Holder distortion ceiling between two exponents and the dimension-ratio
//! curve behind it, as CSV for plotting.
//!
//! Run with: cargo run --example holder_distortion

use popcorn_pyramids::dimensions::{
    holder_exponent_bound, holder_theta_star, intermediate_dim_formula,
};
use popcorn_pyramids::exact::{parse_ratio, ratio_u};
use popcorn_pyramids::sets::{SetSpec, Variant};

fn main() -> popcorn_pyramids::Result<()> {
    let d = 2u32;
    let t1 = parse_ratio("0.3")?;
    let t2 = parse_ratio("1")?;
    let bound = holder_exponent_bound(d, &t1, &t2)?;
    let star = holder_theta_star(d, &t2);
    eprintln!("# alpha bound {bound} attained at theta* = {star}");
    let s1 = SetSpec::from_ratio(&t1, d, Variant::Graph)?;
    let s2 = SetSpec::from_ratio(&t2, d, Variant::Graph)?;
    println!("theta,dim_t2,dim_t1,ratio");
    for i in 0..=40u64 {
        let theta = ratio_u(i, 40);
        let top = intermediate_dim_formula(&s2, &theta)?;
        let bottom = intermediate_dim_formula(&s1, &theta)?;
        println!("{theta},{top},{bottom},{}", &top / &bottom);
    }
    Ok(())
}
