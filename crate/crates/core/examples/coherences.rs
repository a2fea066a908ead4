//! Normalized MQ coherence intensities J_n(τ) for one (N, b).
//!
//!     cargo run --release --example coherences -- 101 0.01

use mqnmr::{linspace, BlockSimulation, InitialStateMode, SpinCount, TemperatureParams};

fn main() -> mqnmr::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(101);
    let b: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.01);
    let sim = BlockSimulation::new(
        SpinCount::new(n)?,
        TemperatureParams::from_b(b, InitialStateMode::Exact)?,
    )?;
    let orders = [0, 2, 4, 6, 8];
    print!("{:>6}", "D_tau");
    for o in orders {
        print!(" {:>11}", format!("J_{o}"));
    }
    println!(" {:>11}", "sum");
    for s in sim.spectra(&linspace(0.0, 3.0, 16))? {
        print!("{:>6.2}", s.time);
        for o in orders {
            print!(" {:>11.4e}", s.j(o));
        }
        println!(" {:>11.8}", s.sum());
    }
    Ok(())
}
