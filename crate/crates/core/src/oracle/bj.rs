//! Two-pulse preparation of dipolar order from Zeeman order: a 90° x-pulse,
//! free evolution under the secular dipolar Hamiltonian, then a θ y-pulse.
//! The conserved Zeeman and dipolar energies of the resulting state fix the
//! temperatures of the equilibrium it relaxes to.

use super::dense::{hermitian_function, CMatrix, CollectiveOperators, HermitianEigen};
use crate::error::{Error, Result};
use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BJParams {
    pub spins: usize,
    /// Zeeman exponent a = ħω₀/(k_B T) of the initial equilibrium.
    pub a: f64,
    /// Rotation angle of the second pulse, radians.
    pub theta: f64,
    /// Free-evolution time Dτ between the pulses.
    pub tau: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BJOutcome {
    /// Tr{I_z σ'(τ)}.
    pub zeeman_trace: f64,
    /// |Tr{I_z σ'}| / (‖I_z‖·‖σ'‖) with spectral norms.
    pub zeeman_relative: f64,
    /// Tr{H_dz σ'(τ)} in units of D.
    pub dipolar_trace: f64,
    /// Inverse dipolar temperature (units of 1/D) of the final equilibrium,
    /// from the linearized dipolar energy balance at α = 0.
    pub beta_extracted: f64,
    /// Dimensionless inverse Zeeman temperature α·ω₀ solving the Zeeman
    /// balance with β fixed at `beta_extracted`.
    pub alpha_extracted: f64,
}

/// Normalized populations of e^{aI_z}/Z, exponent shifted by its maximum.
fn zeeman_populations(twice_m: &[i32], a: f64) -> Result<Vec<f64>> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::ZeemanOverflow(a));
    }
    let top = a * twice_m.iter().map(|m| m.abs()).max().unwrap_or(0) as f64 / 2.0;
    let weights: Vec<f64> = twice_m.iter().map(|&m| (a * f64::from(m) / 2.0 - top).exp()).collect();
    let z: f64 = weights.iter().sum();
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::ZeemanOverflow(a));
    }
    Ok(weights.into_iter().map(|w| w / z).collect())
}

/// e^{aI_y}/Z built directly in the I_y eigenbasis, shifted by the maximum
/// exponent.
pub fn transverse_zeeman_state(ops: &CollectiveOperators, a: f64) -> Result<CMatrix> {
    let top = a * ops.spins as f64 / 2.0;
    let m = hermitian_function(&ops.iy, |l| Complex64::new((a * l - top).exp(), 0.0))?;
    Ok(&m / m.trace())
}

fn rotation(generator: &CMatrix, angle: f64) -> Result<CMatrix> {
    // e^{-i·angle·G}
    hermitian_function(generator, |l| Complex64::from_polar(1.0, -angle * l))
}

/// The state after both pulses, built pulse by pulse.
pub fn bj_state(ops: &CollectiveOperators, params: &BJParams) -> Result<CMatrix> {
    let pops = zeeman_populations(&ops.twice_m, params.a)?;
    let sigma_i = CMatrix::from_diagonal(&DVector::from_iterator(
        pops.len(),
        pops.iter().map(|&w| Complex64::new(w, 0.0)),
    ));
    // e^{iπ/2 I_x} σ e^{-iπ/2 I_x}
    let x_pulse = rotation(&ops.ix, -FRAC_PI_2)?;
    let after_x = &x_pulse * sigma_i * x_pulse.adjoint();
    let free = rotation(&ops.h_dz(), params.tau)?;
    let evolved = &free * after_x * free.adjoint();
    let y_pulse = rotation(&ops.iy, params.theta)?;
    Ok(&y_pulse * evolved * y_pulse.adjoint())
}

/// Everything about the sequence that does not depend on (a, θ, τ).
///
/// The full propagator is U = V_y e^{-iθΛ_y} (V_y†V_d) e^{-iτΛ_d} (V_d†X)
/// with X the fixed x-pulse, so a draw costs two matrix products plus one
/// more for the dipolar trace.
#[derive(Clone, Debug)]
pub struct BJWorkspace {
    pub ops: CollectiveOperators,
    y: HermitianEigen,
    d: HermitianEigen,
    y_to_d: CMatrix,
    d_to_y: CMatrix,
    d_from_x: CMatrix,
    h_diag: Vec<f64>,
    h_dz_sq: f64,
}

impl BJWorkspace {
    pub fn new(spins: usize) -> Result<Self> {
        let ops = CollectiveOperators::new(spins)?;
        let h_dz = ops.h_dz();
        let y = HermitianEigen::new(&ops.iy)?;
        let d = HermitianEigen::new(&h_dz)?;
        let x_pulse = rotation(&ops.ix, -FRAC_PI_2)?;
        let y_to_d = y.eigenvectors.adjoint() * &d.eigenvectors;
        let d_to_y = y_to_d.adjoint();
        let d_from_x = d.eigenvectors.adjoint() * x_pulse;
        let h_diag = (0..ops.dim()).map(|i| h_dz[(i, i)].re).collect();
        let h_dz_sq = d.eigenvalues.iter().map(|l| l * l).sum();
        Ok(Self {
            ops,
            y,
            d,
            y_to_d,
            d_to_y,
            d_from_x,
            h_diag,
            h_dz_sq,
        })
    }

    /// U with columns indexed by the product basis, rows in the I_y
    /// eigenbasis (so V_y·Q is the propagator).
    fn reduced_propagator(&self, params: &BJParams) -> CMatrix {
        let mut q = self.y_to_d.clone();
        for (r, &ly) in self.y.eigenvalues.iter().enumerate() {
            let p = Complex64::from_polar(1.0, -params.theta * ly);
            q.row_mut(r).iter_mut().for_each(|x| *x *= p);
        }
        for (c, &ld) in self.d.eigenvalues.iter().enumerate() {
            let p = Complex64::from_polar(1.0, -params.tau * ld);
            q.column_mut(c).iter_mut().for_each(|x| *x *= p);
        }
        q * &self.d_from_x
    }

    pub fn state(&self, params: &BJParams) -> Result<CMatrix> {
        let pops = zeeman_populations(&self.ops.twice_m, params.a)?;
        let u = &self.y.eigenvectors * self.reduced_propagator(params);
        let mut scaled = u.clone();
        for (c, &w) in pops.iter().enumerate() {
            scaled.column_mut(c).iter_mut().for_each(|x| *x *= w);
        }
        Ok(scaled * u.adjoint())
    }

    /// Traces and extracted temperatures. Both traces are read off
    /// Σ_k p_k ⟨k|U†OU|k⟩ without forming σ'.
    pub fn outcome(&self, params: &BJParams) -> Result<BJOutcome> {
        let pops = zeeman_populations(&self.ops.twice_m, params.a)?;
        let q = self.reduced_propagator(params);
        let u = &self.y.eigenvectors * &q;
        let in_d = &self.d_to_y * &q;
        let mut zeeman_trace = 0.0;
        let mut dipolar_trace = 0.0;
        for (k, &p) in pops.iter().enumerate() {
            let z: f64 = u
                .column(k)
                .iter()
                .zip(&self.ops.twice_m)
                .map(|(x, &m)| x.norm_sqr() * f64::from(m) / 2.0)
                .sum();
            let h: f64 = in_d
                .column(k)
                .iter()
                .zip(self.d.eigenvalues.iter())
                .map(|(x, l)| x.norm_sqr() * l)
                .sum();
            zeeman_trace += p * z;
            dipolar_trace += p * h;
        }

        // unitary conjugation keeps the spectrum, so ‖σ'‖ = max p
        let sigma_norm = pops.iter().cloned().fold(0.0, f64::max);
        let iz_norm = params.spins as f64 / 2.0;
        let zeeman_relative = zeeman_trace.abs() / (iz_norm * sigma_norm);

        let beta_extracted = self.ops.dim() as f64 * dipolar_trace / self.h_dz_sq;
        let alpha_extracted = solve_zeeman_balance(&self.ops.twice_m, &self.h_diag, beta_extracted, zeeman_trace);
        Ok(BJOutcome {
            zeeman_trace,
            zeeman_relative,
            dipolar_trace,
            beta_extracted,
            alpha_extracted,
        })
    }
}

/// Runs the sequence and the conservation-law bookkeeping.
pub fn bj_sequence(params: &BJParams) -> Result<BJOutcome> {
    BJWorkspace::new(params.spins)?.outcome(params)
}

/// Polarization Tr{I_z e^{αI_z}(1 + βH_dz)} / Tr{e^{αI_z}(1 + βH_dz)}.
fn polarization(twice_m: &[i32], h_diag: &[f64], beta: f64, alpha: f64) -> f64 {
    let m_max = twice_m.iter().map(|m| m.abs()).max().unwrap_or(0);
    let top = alpha.abs() * f64::from(m_max) / 2.0;
    let (mut num, mut den) = (0.0, 0.0);
    for (&m, &h) in twice_m.iter().zip(h_diag) {
        let mv = f64::from(m) / 2.0;
        let w = (alpha * mv - top).exp() * (1.0 + beta * h);
        num += mv * w;
        den += w;
    }
    num / den
}

/// Bisection for α in the Zeeman energy balance. The bracket grows outward
/// from a narrow window around zero so the root closest to α = 0 is taken;
/// with a strongly negative β the weights 1 + βh change sign and the balance
/// can have spurious far roots. Returns NaN when no sign change is found in
/// |α| <= 200.
fn solve_zeeman_balance(twice_m: &[i32], h_diag: &[f64], beta: f64, target: f64) -> f64 {
    let f = |alpha: f64| polarization(twice_m, h_diag, beta, alpha) - target;
    let (mut lo, mut hi) = (-1e-6, 1e-6);
    while f(lo) * f(hi) > 0.0 {
        if hi > 200.0 {
            return f64::NAN;
        }
        lo *= 2.0;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
