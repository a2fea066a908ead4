//! Two-pulse preparation of dipolar order: the Zeeman trace stays zero while
//! the dipolar energy, and so β, depends on the pulse spacing.
//!
//!     cargo run --release --example dipolar_order -- 6 40

use mqnmr::linspace;
use mqnmr::oracle::{BJParams, BJWorkspace};

fn main() -> mqnmr::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(6);
    let a: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(40.0);
    let ws = BJWorkspace::new(n)?;
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12}",
        "D_tau", "Tr(Iz s)", "Tr(Hdz s)", "beta", "alpha"
    );
    for tau in linspace(0.0, 5.0, 11) {
        let o = ws.outcome(&BJParams {
            spins: n,
            a,
            theta: std::f64::consts::FRAC_PI_4,
            tau,
        })?;
        println!(
            "{tau:>6.2} {:>12.2e} {:>12.6} {:>12.6} {:>12.2e}",
            o.zeeman_trace, o.dipolar_trace, o.beta_extracted, o.alpha_extracted
        );
    }
    Ok(())
}
