//! The block method against the dense 2^N simulation and the phase-encoded
//! readout of the same state.
//!
//!     cargo run --release --example oracle_compare -- 5 0.1 1.0

use mqnmr::oracle::{coherences_via_phase, DenseSimulation};
use mqnmr::{BlockSimulation, InitialStateMode, SpinCount, TemperatureParams};

fn main() -> mqnmr::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(5);
    let b: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.1);
    let t: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1.0);
    let params = TemperatureParams::from_b(b, InitialStateMode::Exact)?;

    let block = BlockSimulation::new(SpinCount::new(n)?, params)?.spectrum_at(t)?;
    let dense_sim = DenseSimulation::new(n, &params)?;
    let dense = dense_sim.spectrum_at(t);
    let phase = coherences_via_phase(n, &params, t, 2 * n + 2)?;

    println!("{:>4} {:>14} {:>14} {:>14}", "n", "block", "dense", "phase");
    for k in (0..=n as i32).step_by(2) {
        println!(
            "{k:>4} {:>14.10} {:>14.10} {:>14.10}",
            block.j(k),
            dense.j(k),
            phase.j(k)
        );
    }
    println!(
        "second moment: {:.12} (spectrum) vs {:.12} (commutator form)",
        block.second_moment(),
        dense_sim.second_moment_direct(t)
    );
    Ok(())
}
