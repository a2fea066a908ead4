//! Fisher-information thresholds B(N, k) separating k- from (k+1)-partite
//! entanglement, and the cluster size a given F_Q certifies.
//!
//!     cargo run --example bound_table -- 101 2500

use mqnmr::certify_cluster;
use mqnmr::metrics::bound_table;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(101);
    let fq: Option<f64> = args.next().and_then(|a| a.parse().ok());
    for (k, b) in bound_table(n) {
        println!("{k:>4} {b:>8}");
    }
    if let Some(fq) = fq {
        println!(
            "F_Q = {fq} certifies clusters of at least {} spins",
            certify_cluster(fq, n)
        );
    }
}
