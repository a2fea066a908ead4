//! Total-spin sectors of N spins and the parity chains the dynamics runs on.
//!
//!     cargo run --example sectors -- 7

use mqnmr::sector::build_chains;
use mqnmr::{enumerate_sectors, SpinCount};

fn main() -> mqnmr::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(7);
    let spins = SpinCount::new(n)?;
    println!("{:>6} {:>24} {:>5} {:>12}", "S", "multiplicity", "dim", "chain dims");
    let mut total = num_bigint::BigUint::from(0u32);
    for sector in enumerate_sectors(spins) {
        let [even, odd] = build_chains(&sector);
        println!(
            "{:>6} {:>24} {:>5} {:>6}+{:<5}",
            sector.s.value(),
            sector.multiplicity,
            sector.dimension(),
            even.len(),
            odd.len()
        );
        total += &sector.multiplicity * sector.dimension();
    }
    println!("sum of mult x dim = {total} (2^{n})");
    Ok(())
}
