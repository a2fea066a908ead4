//! Block dynamics at N = 3 next to the closed-form intensities.
//!
//!     cargo run --example three_spin -- 0.5

use mqnmr::three_spin::{j0_analytic, j2_analytic};
use mqnmr::{linspace, BlockSimulation, InitialStateMode, SpinCount, TemperatureParams};

fn main() -> mqnmr::Result<()> {
    let b: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.5);
    let sim = BlockSimulation::new(
        SpinCount::new(3)?,
        TemperatureParams::from_b(b, InitialStateMode::Exact)?,
    )?;
    println!("{:>6} {:>14} {:>14} {:>10}", "D_tau", "J_0", "J_2", "|dJ_2|");
    for t in linspace(0.0, 3.0, 13) {
        let s = sim.spectrum_at(t)?;
        let dj = (s.j(2) - j2_analytic(b, t))
            .abs()
            .max((s.j(0) - j0_analytic(b, t)).abs());
        println!("{t:>6.2} {:>14.10} {:>14.10} {dj:>10.1e}", s.j(0), s.j(2));
    }
    Ok(())
}
