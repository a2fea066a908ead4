//! Closed-form coherence intensities for three spins.

/// J_0(τ) = 1 - ½·tanh²(3b/2)·sin²(√3·Dτ).
pub fn j0_analytic(b: f64, d_tau: f64) -> f64 {
    1.0 - 2.0 * j2_analytic(b, d_tau)
}

/// Intensity of each of the orders ±2: ¼·tanh²(3b/2)·sin²(√3·Dτ).
pub fn j2_analytic(b: f64, d_tau: f64) -> f64 {
    let envelope = (1.5 * b).tanh();
    let osc = (3f64.sqrt() * d_tau).sin();
    0.25 * envelope * envelope * osc * osc
}

/// Sampled analytic curves for one inverse temperature.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeSpinCurve {
    pub b: f64,
    /// (Dτ, J_0, J_2)
    pub samples: Vec<(f64, f64, f64)>,
}

impl ThreeSpinCurve {
    pub fn sample(b: f64, times: &[f64]) -> Self {
        let samples = times
            .iter()
            .map(|&t| (t, j0_analytic(b, t), j2_analytic(b, t)))
            .collect();
        Self { b, samples }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn endpoints() {
        assert_eq!(j0_analytic(0.7, 0.0), 1.0);
        assert!(j2_analytic(0.7, PI / 3f64.sqrt()) < 1e-30);
        let peak = PI / (2.0 * 3f64.sqrt());
        assert!((j0_analytic(60.0, peak) - 0.5).abs() < 1e-15);
        assert!((j2_analytic(60.0, peak) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn direct_evaluation() {
        let expected = 1.0 - 0.5 * 0.015f64.tanh().powi(2) * 3f64.sqrt().sin().powi(2);
        assert!((j0_analytic(0.01, 1.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn period_and_conservation() {
        let period = PI / 3f64.sqrt();
        for i in 0..200 {
            let t = i as f64 * 0.037;
            for b in [0.0, 0.01, 0.5, 2.0, 10.0] {
                let (j0, j2) = (j0_analytic(b, t), j2_analytic(b, t));
                assert!((j0 + 2.0 * j2 - 1.0).abs() < 1e-15);
                assert!((0.0..=0.25).contains(&j2));
                assert!((j2_analytic(b, t + period) - j2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn envelope_monotone_in_b() {
        let peak = PI / (2.0 * 3f64.sqrt());
        let mut prev = -1.0;
        for i in 0..100 {
            let b = i as f64 * 0.05;
            let amp = 2.0 * j2_analytic(b, peak);
            assert!((amp - 0.5 * (1.5 * b).tanh().powi(2)).abs() < 1e-15);
            assert!(amp >= prev);
            prev = amp;
        }
    }
}
