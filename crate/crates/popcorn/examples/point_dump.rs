//! Streaming point enumeration and the dump format: one line per point,
//! `q p_1 ... p_{d-1}`.
//!
//! Run with: cargo run --example point_dump

use std::io::Write;

use popcorn_pyramids::sets::{enumerate_points, write_point_dump, SetSpec, Variant};

fn main() -> popcorn_pyramids::Result<()> {
    let spec = SetSpec::new(1, 1, 3, Variant::Graph)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    write_point_dump(enumerate_points(&spec, 5, 10_000)?, &mut out)?;
    writeln!(out, "# graph points of the d=3 set with q <= 5")?;
    Ok(())
}
