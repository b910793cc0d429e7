//! The totient growth ratio phi(n) lnln(n)/n: its empirical floor over a
//! sieve range, which is what keeps the layer measures from degenerating.
//!
//! Run with: cargo run --example totient_floor

use popcorn_pyramids::number_theory::TotientTable;

fn main() -> popcorn_pyramids::Result<()> {
    let table = TotientTable::build(1_000_000)?;
    let (argmin, min) = table.min_growth_ratio();
    println!("growth ratio over [3, 10^6]: floor {min:.6} at n = {argmin}");
    for n in [3u64, 6, 30, 210, 2310, 30030, 510510] {
        println!("n = {n:<7} phi = {:<7} ratio = {:.6}", table.phi(n), table.growth_ratio(n));
    }
    Ok(())
}
