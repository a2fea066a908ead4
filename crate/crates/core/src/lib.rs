//! Multiple-quantum NMR coherence dynamics of N spin-1/2 particles in a
//! nanopore, starting from a dipolar ordered state.
//!
//! The crate reduces the 2^N-dimensional problem to parity chains of the
//! total-spin sectors ([`sector`]), propagates them exactly ([`dynamics`]),
//! and turns the resulting coherence spectrum into a Fisher-information lower
//! bound and a certified entangled-cluster size ([`metrics`]). A closed-form
//! three-spin solution ([`three_spin`]) and a dense multiplicative-basis
//! simulator ([`oracle`]) provide independent checks. [`runner`] holds the
//! sweep orchestration and file output behind the `mqnmr` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod metrics;
pub mod oracle;
pub mod runner;
pub mod sector;
pub mod three_spin;
pub mod tridiag;

pub use constants::PhysicalConstants;
pub use dynamics::{
    BlockSimulation, BlockState, ChainSelection, CoherenceSpectrum, InitialStateMode, TemperatureParams,
};
pub use error::{Error, Result};
pub use metrics::{certify_cluster, entanglement_bound, EntanglementReport, SweepResult};
pub use sector::{enumerate_sectors, HalfInt, SpinCount, SpinSector};

/// Uniform grid `start, start + step, ...` up to and including `stop`
/// (within a relative slack of 1e-9 of a step).
pub fn time_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || !(stop > start) {
        return Vec::new();
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| start + i as f64 * step).collect()
}

/// `count` evenly spaced points covering `[start, stop]` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}
