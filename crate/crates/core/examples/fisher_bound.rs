//! Fisher-information lower bound and certified entangled-cluster size over
//! time at one temperature.
//!
//!     cargo run --release --example fisher_bound -- 101 3.2e-4 1e5
//!
//! Arguments: N, T in kelvin, dipolar coupling D/2π in Hz. The span
//! ignores the build-up before Dτ = 0.3.

use mqnmr::metrics::{cluster_span, SPAN_SETTLE_TIME};
use mqnmr::{
    time_grid, BlockSimulation, EntanglementReport, InitialStateMode, PhysicalConstants, SpinCount, TemperatureParams,
};

fn main() -> mqnmr::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(101);
    let t_kelvin: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(3.2e-4);
    let coupling: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1.0e4);
    let constants = PhysicalConstants::with_coupling_hz(coupling);
    let params = TemperatureParams::from_kelvin(t_kelvin, &constants, InitialStateMode::Exact)?;
    println!("N = {n}, T = {t_kelvin:e} K, b = {:.4}", params.b);

    let sim = BlockSimulation::new(SpinCount::new(n)?, params)?;
    let reports: Vec<EntanglementReport> = sim
        .spectra(&time_grid(0.0, 3.0, 0.01))?
        .iter()
        .map(|s| EntanglementReport::from_spectrum(s, n))
        .collect();
    for r in reports.iter().step_by(25) {
        println!(
            "D_tau {:>5.2}  F_Q >= {:>10.2}  cluster {:>3}",
            r.time, r.fq_lower, r.max_entangled_spins
        );
    }
    match cluster_span(&reports, SPAN_SETTLE_TIME) {
        Some((lo, hi)) => println!("cluster span {lo}-{hi}"),
        None => println!("no entanglement certified"),
    }
    Ok(())
}
