use super::dense::CMatrix;
use super::simulate::DenseSimulation;
use crate::dynamics::{CoherenceSpectrum, TemperatureParams};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

impl DenseSimulation {
    /// G(τ, φ) = Tr{A ρ_i A† ρ_i} with A = e^{iH_MQ τ} e^{iφI_z} e^{-iH_MQ τ}:
    /// the signal after preparation, a phase increment φ, and time-reversed
    /// mixing.
    pub fn phase_signal(&self, d_tau: f64, phi: f64) -> Complex64 {
        self.phase_signal_with(&self.propagator(d_tau), phi)
    }

    fn phase_signal_with(&self, u: &CMatrix, phi: f64) -> Complex64 {
        let mut phased = u.clone();
        for (r, &m) in self.ops.twice_m.iter().enumerate() {
            let p = Complex64::from_polar(1.0, phi * f64::from(m) / 2.0);
            for x in phased.row_mut(r).iter_mut() {
                *x *= p;
            }
        }
        let a: CMatrix = u.adjoint() * phased;
        let rho = &self.rho_initial;
        (&a * rho * a.adjoint() * rho).trace()
    }
}

/// Coherence intensities read out the way the experiment does: sample G(τ, φ)
/// on a uniform φ grid and Fourier transform, J_n = (1/K)Σ_j G(φ_j)e^{-inφ_j}/Tr{ρ_i²}.
pub fn coherences_via_phase(
    spins: usize,
    params: &TemperatureParams,
    d_tau: f64,
    phase_grid_size: usize,
) -> Result<CoherenceSpectrum> {
    let required = 2 * spins + 2;
    if phase_grid_size < required {
        return Err(Error::Aliasing {
            grid: phase_grid_size,
            max_order: spins,
            required,
        });
    }
    let sim = DenseSimulation::new(spins, params)?;
    let k = phase_grid_size;
    let u = sim.propagator(d_tau);
    let mut signal: Vec<Complex64> = (0..k)
        .map(|j| sim.phase_signal_with(&u, 2.0 * PI * j as f64 / k as f64))
        .collect();
    FftPlanner::new().plan_fft_forward(k).process(&mut signal);

    let mut spectrum = CoherenceSpectrum::zeros(d_tau, spins, sim.purity);
    for n in -(spins as i32)..=(spins as i32) {
        let bin = n.rem_euclid(k as i32) as usize;
        *spectrum.j_mut(n) = signal[bin].re / (k as f64 * sim.purity);
    }
    Ok(spectrum)
}
