//! Dyadic cover counts across scales with a log-log slope fit against the
//! closed-form box dimension.
//!
//! Run with: cargo run --example box_counting

use popcorn_pyramids::covering::{cover_count, CoverReport, DyadicScale};
use popcorn_pyramids::dimensions::{box_dim_formula, fit_box_dimension};
use popcorn_pyramids::exact::ratio_f64;
use popcorn_pyramids::sets::{SetSpec, Variant, DEFAULT_POINT_CAP};

fn main() -> popcorn_pyramids::Result<()> {
    let spec = SetSpec::new(1, 1, 2, Variant::Graph)?;
    println!("{}", CoverReport::CSV_HEADER);
    let mut counts = Vec::new();
    for j in 6..=12 {
        let report = cover_count(&spec, DyadicScale::new(j)?, DEFAULT_POINT_CAP)?;
        println!("{}", report.csv_row());
        counts.push((j, report.total));
    }
    let fit = fit_box_dimension(&counts)?;
    let formula = box_dim_formula(&spec);
    println!("# least-squares slope : {:.4}", fit.slope);
    println!("# two-point slope     : {:.4}", fit.two_point_slope);
    println!("# closed form         : {} = {:.4}", formula, ratio_f64(&formula));
    Ok(())
}
