//! Time-averaged maximal entangled cluster over a small (N, T) grid.
//!
//!     cargo run --release --example temperature_sweep -- 1e5

use mqnmr::metrics::time_average_max_entangled;
use mqnmr::{
    linspace, time_grid, BlockSimulation, EntanglementReport, InitialStateMode, PhysicalConstants, SpinCount,
    TemperatureParams,
};

fn main() -> mqnmr::Result<()> {
    let coupling: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.0e5);
    let constants = PhysicalConstants::with_coupling_hz(coupling);
    let temps: Vec<f64> = linspace(4.8e-5f64.ln(), 6.0e-4f64.ln(), 4)
        .into_iter()
        .map(f64::exp)
        .collect();
    let times = time_grid(0.0, 3.0, 0.02);
    println!("{:>4} {:>10} {:>8} {:>8}", "N", "T (K)", "b", "avg");
    for n in [51, 75, 101] {
        for &t in &temps {
            let params = TemperatureParams::from_kelvin(t, &constants, InitialStateMode::Exact)?;
            let reports: Vec<EntanglementReport> = BlockSimulation::new(SpinCount::new(n)?, params)?
                .spectra(&times)?
                .iter()
                .map(|s| EntanglementReport::from_spectrum(s, n))
                .collect();
            let r = time_average_max_entangled(&reports, &params)?;
            println!("{n:>4} {t:>10.3e} {:>8.3} {:>8.2}", params.b, r.avg_max_entangled);
        }
    }
    Ok(())
}
