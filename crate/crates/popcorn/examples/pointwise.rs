//! Pointwise evaluation of the pyramid function at exact rational inputs.
//!
//! Run with: cargo run --example pointwise

use popcorn_pyramids::exact::parse_ratio;
use popcorn_pyramids::sets::{evaluate, Height, SetSpec, Variant};

fn main() -> popcorn_pyramids::Result<()> {
    let spec = SetSpec::new(1, 1, 3, Variant::Graph)?;
    for coords in [["1/2", "1/2"], ["1/2", "1/3"], ["2/4", "1/2"], ["0", "1/2"], ["3/7", "5/7"]] {
        let xs = [parse_ratio(coords[0])?, parse_ratio(coords[1])?];
        let value = evaluate(&spec, &xs)?;
        match value {
            Height::Zero => println!("f({}, {}) = 0", coords[0], coords[1]),
            Height::Reciprocal { denominator } => println!(
                "f({}, {}) = 1/{denominator}  (~{:.5})",
                coords[0],
                coords[1],
                value.value_f64(&spec)
            ),
        }
    }
    Ok(())
}
