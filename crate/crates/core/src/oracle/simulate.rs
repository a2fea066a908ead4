use super::dense::{CMatrix, CollectiveOperators, HermitianEigen};
use crate::dynamics::{CoherenceSpectrum, InitialStateMode, TemperatureParams};
use crate::error::Result;
use num_complex::Complex64;

/// Full-space evolution of ρ(τ) = e^{-iH_MQ τ} ρ_i e^{iH_MQ τ}.
#[derive(Clone, Debug)]
pub struct DenseSimulation {
    pub ops: CollectiveOperators,
    pub rho_initial: CMatrix,
    /// Tr{ρ_i²}.
    pub purity: f64,
    h_mq_eig: HermitianEigen,
}

impl DenseSimulation {
    pub fn new(spins: usize, params: &TemperatureParams) -> Result<Self> {
        let ops = CollectiveOperators::new(spins)?;
        let h_dz = HermitianEigen::new(&ops.h_dz())?;
        let rho = match params.mode {
            InitialStateMode::Exact => {
                // shift by the largest dipolar energy to keep exp() bounded
                let top = h_dz.eigenvalues.max();
                h_dz.apply(|l| Complex64::new((params.b * (l - top)).exp(), 0.0))
            }
            InitialStateMode::Linearized => h_dz.apply(|l| Complex64::new(1.0 + params.b * l, 0.0)),
        };
        let rho = &rho / rho.trace();
        let purity = (&rho * &rho).trace().re;
        let h_mq_eig = HermitianEigen::new(&ops.h_mq())?;
        Ok(Self {
            ops,
            rho_initial: rho,
            purity,
            h_mq_eig,
        })
    }

    /// e^{-iH_MQ τ}.
    pub fn propagator(&self, d_tau: f64) -> CMatrix {
        let v = &self.h_mq_eig.eigenvectors;
        let phases = self
            .h_mq_eig
            .eigenvalues
            .map(|l| Complex64::from_polar(1.0, -l * d_tau));
        v * CMatrix::from_diagonal(&phases) * v.adjoint()
    }

    pub fn rho_at(&self, d_tau: f64) -> CMatrix {
        let u = self.propagator(d_tau);
        &u * &self.rho_initial * u.adjoint()
    }

    /// Bins |ρ_{ab}|² by the I_z eigenvalue difference m_a - m_b.
    pub fn spectrum_at(&self, d_tau: f64) -> CoherenceSpectrum {
        let rho = self.rho_at(d_tau);
        let n = self.ops.spins;
        let mut spectrum = CoherenceSpectrum::zeros(d_tau, n, self.purity);
        let m = &self.ops.twice_m;
        for c in 0..rho.ncols() {
            for a in 0..rho.nrows() {
                let order = (m[a] - m[c]) / 2;
                *spectrum.j_mut(order) += rho[(a, c)].norm_sqr() / self.purity;
            }
        }
        spectrum
    }

    /// 2·Tr{ρ²I_z² - (ρI_z)²}/Tr{ρ_i²} evaluated with operator products.
    pub fn second_moment_direct(&self, d_tau: f64) -> f64 {
        let rho = self.rho_at(d_tau);
        let iz = &self.ops.iz;
        let rho_iz = &rho * iz;
        let first = (&rho * &rho * iz * iz).trace();
        let second = (&rho_iz * &rho_iz).trace();
        2.0 * (first - second).re / self.purity
    }
}

/// Coherence spectrum from the dense simulator.
pub fn dense_simulate(spins: usize, params: &TemperatureParams, d_tau: f64) -> Result<CoherenceSpectrum> {
    Ok(DenseSimulation::new(spins, params)?.spectrum_at(d_tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::three_spin::{j0_analytic, j2_analytic};

    fn params(b: f64) -> TemperatureParams {
        TemperatureParams::from_b(b, InitialStateMode::Exact).unwrap()
    }

    #[test]
    fn three_spins_match_closed_form() {
        for b in [0.01, 0.5, 2.0] {
            let sim = DenseSimulation::new(3, &params(b)).unwrap();
            for i in 0..30 {
                let t = i as f64 * 0.1;
                let sp = sim.spectrum_at(t);
                assert!((sp.j(0) - j0_analytic(b, t)).abs() < 1e-10);
                assert!((sp.j(2) - j2_analytic(b, t)).abs() < 1e-10);
                assert!((sp.j(-2) - j2_analytic(b, t)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn single_spin_static() {
        let sim = DenseSimulation::new(1, &params(0.8)).unwrap();
        for t in [0.0, 1.0, 2.5] {
            assert!((sim.spectrum_at(t).j(0) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn unitary_propagator() {
        let sim = DenseSimulation::new(5, &params(0.2)).unwrap();
        let u = sim.propagator(1.3);
        let id = CMatrix::identity(32, 32);
        assert!((&u * u.adjoint() - id).camax() < 1e-12);
    }

    #[test]
    fn memory_guard() {
        assert!(matches!(
            dense_simulate(11, &params(0.1), 0.5),
            Err(Error::DenseTooLarge { .. })
        ));
    }

    #[test]
    fn both_signs_computed_independently() {
        let sim = DenseSimulation::new(6, &params(0.9)).unwrap();
        let sp = sim.spectrum_at(1.4);
        for n in 1..=6 {
            assert!((sp.j(n) - sp.j(-n)).abs() < 1e-13);
        }
        assert!(sp.max_odd() < 1e-14);
    }
}
