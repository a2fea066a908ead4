use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const K_B: f64 = 1.380_649e-23;

/// Physical scales of the nanopore model. Energies inside the crate are kept in
/// units of `coupling`, so these only enter temperature conversion and reporting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Averaged dipolar coupling constant D, rad/s.
    pub coupling: f64,
    /// Larmor frequency, rad/s.
    pub larmor: f64,
    pub hbar: f64,
    pub k_b: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            coupling: 2.0 * PI * 1.0e4,
            larmor: 2.0 * PI * 500.0e6,
            hbar: HBAR,
            k_b: K_B,
        }
    }
}

impl PhysicalConstants {
    /// Constants with the dipolar coupling given as an ordinary frequency in Hz.
    pub fn with_coupling_hz(hz: f64) -> Self {
        Self {
            coupling: 2.0 * PI * hz,
            ..Self::default()
        }
    }

    /// ħD/k_B in Kelvin.
    pub fn dipolar_kelvin(&self) -> f64 {
        self.hbar * self.coupling / self.k_b
    }

    /// ħω₀/k_B in Kelvin.
    pub fn zeeman_kelvin(&self) -> f64 {
        self.hbar * self.larmor / self.k_b
    }

    /// Dimensionless inverse dipolar temperature b = ħD/(k_B T).
    pub fn b_from_kelvin(&self, t_kelvin: f64) -> f64 {
        self.dipolar_kelvin() / t_kelvin
    }

    pub fn kelvin_from_b(&self, b: f64) -> f64 {
        self.dipolar_kelvin() / b
    }

    /// Dimensionless Zeeman exponent a = ħω₀/(k_B T).
    pub fn zeeman_exponent(&self, t_kelvin: f64) -> f64 {
        self.zeeman_kelvin() / t_kelvin
    }

    pub fn is_valid(&self) -> bool {
        self.coupling > 0.0 && self.larmor > 0.0 && self.hbar > 0.0 && self.k_b > 0.0
    }
}
