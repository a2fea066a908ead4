//! Second moment of the coherence spectrum, the Fisher-information lower bound
//! F_Q = 2·M₂, and certification of (k+1)-spin entanglement.

use crate::dynamics::{CoherenceSpectrum, TemperatureParams};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Σ n² J_n.
pub fn second_moment(spectrum: &CoherenceSpectrum) -> f64 {
    spectrum.second_moment()
}

/// B(N, k) = n·k² + (N - n·k)² with n = ⌊N/k⌋. Exceeding it certifies
/// (k+1)-spin entanglement.
pub fn entanglement_bound(spins: usize, k: usize) -> Result<u64> {
    if k == 0 || k > spins {
        return Err(Error::ClusterOutOfRange { k, n: spins });
    }
    let (n_total, k) = (spins as u64, k as u64);
    let n = n_total / k;
    let rem = n_total - n * k;
    Ok(n * k * k + rem * rem)
}

/// All bounds B(N, k) for k = 1..=N.
pub fn bound_table(spins: usize) -> Vec<(usize, u64)> {
    (1..=spins)
        .map(|k| (k, entanglement_bound(spins, k).expect("k in range")))
        .collect()
}

/// Largest certified cluster size: 1 + max{k in [1, N-1] : F > B(N, k)},
/// or 1 when the bound is never exceeded. Every k is scanned, so the result
/// is monotone in `fq_lower` regardless of the shape of B(N, ·).
pub fn certify_cluster(fq_lower: f64, spins: usize) -> usize {
    (1..spins)
        .rev()
        .find(|&k| fq_lower > entanglement_bound(spins, k).expect("k in range") as f64)
        .map_or(1, |k| k + 1)
}

/// Second moment, QFI lower bound and certified cluster size at one time point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub time: f64,
    pub m2: f64,
    pub fq_lower: f64,
    pub max_entangled_spins: usize,
    pub spins: usize,
}

impl EntanglementReport {
    pub fn from_spectrum(spectrum: &CoherenceSpectrum, spins: usize) -> Self {
        let m2 = second_moment(spectrum);
        let fq_lower = 2.0 * m2;
        Self {
            time: spectrum.time,
            m2,
            fq_lower,
            max_entangled_spins: certify_cluster(fq_lower, spins),
            spins,
        }
    }

    /// F_Q can never exceed N²; a larger value signals a normalization bug.
    pub fn within_heisenberg_cap(&self) -> bool {
        let n = self.spins as f64;
        self.fq_lower <= n * n * (1.0 + 1e-12)
    }
}

/// Time-window aggregate for one (N, T) point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spins: usize,
    pub t_kelvin: Option<f64>,
    pub b: f64,
    /// Arithmetic mean of the certified cluster size over the grid; points
    /// without certified entanglement count as 1.
    pub avg_max_entangled: f64,
    pub peak_fq: f64,
    pub window: (f64, f64),
    pub points: usize,
}

/// Averages the certified cluster size over a uniform time grid.
pub fn time_average_max_entangled(reports: &[EntanglementReport], params: &TemperatureParams) -> Result<SweepResult> {
    let (first, last) = match (reports.first(), reports.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::EmptyReports),
    };
    let total: usize = reports.iter().map(|r| r.max_entangled_spins).sum();
    let peak_fq = reports.iter().map(|r| r.fq_lower).fold(f64::NEG_INFINITY, f64::max);
    Ok(SweepResult {
        spins: first.spins,
        t_kelvin: params.t_kelvin,
        b: params.b,
        avg_max_entangled: total as f64 / reports.len() as f64,
        peak_fq,
        window: (first.time, last.time),
        points: reports.len(),
    })
}

/// Dτ after which the F_Q curve has left its initial build-up from zero and
/// oscillates within a steady band.
pub const SPAN_SETTLE_TIME: f64 = 0.3;

/// Range of certified cluster sizes swept by the oscillating F_Q curve: the
/// upper end is the global maximum, the lower end the minimum over
/// `τ >= settle` (the build-up from F_Q = 0 at τ = 0 is excluded). Falls back
/// to the whole window when no point lies past `settle`.
pub fn cluster_span(reports: &[EntanglementReport], settle: f64) -> Option<(usize, usize)> {
    let upper = reports.iter().map(|r| r.max_entangled_spins).max()?;
    let lower = reports
        .iter()
        .filter(|r| r.time >= settle)
        .map(|r| r.max_entangled_spins)
        .min()
        .or_else(|| reports.iter().map(|r| r.max_entangled_spins).min())?;
    Some((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::InitialStateMode;
    use proptest::prelude::*;

    fn report(time: f64, fq: f64, n: usize) -> EntanglementReport {
        EntanglementReport {
            time,
            m2: fq / 2.0,
            fq_lower: fq,
            max_entangled_spins: certify_cluster(fq, n),
            spins: n,
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(entanglement_bound(101, 1).unwrap(), 101);
        assert_eq!(entanglement_bound(101, 101).unwrap(), 10201);
        assert_eq!(entanglement_bound(101, 19).unwrap(), 1841);
        assert_eq!(entanglement_bound(101, 46).unwrap(), 4313);
        assert_eq!(entanglement_bound(101, 2).unwrap(), 201);
        assert!(entanglement_bound(101, 0).is_err());
        assert!(entanglement_bound(101, 102).is_err());
    }

    #[test]
    fn pair_bound_equals_n() {
        for n in 1..500 {
            assert_eq!(entanglement_bound(n, 1).unwrap(), n as u64);
        }
    }

    #[test]
    fn certification_examples() {
        assert_eq!(certify_cluster(0.0, 101), 1);
        assert_eq!(certify_cluster(101.0, 101), 1);
        assert_eq!(certify_cluster(150.0, 101), 2);
        assert_eq!(certify_cluster(201.0, 101), 2);
        assert_eq!(certify_cluster(101.0 * 101.0, 101), 101);
        assert_eq!(certify_cluster(5.0, 1), 1);
        for n in 2..60 {
            assert_eq!(certify_cluster((n * n) as f64, n), n);
        }
    }

    #[test]
    fn ties_certify_only_smaller_cluster() {
        let b19 = entanglement_bound(101, 19).unwrap() as f64;
        assert!(certify_cluster(b19, 101) <= 19);
        assert!(certify_cluster(b19 + 1e-9, 101) >= 20);
    }

    #[test]
    fn time_average() {
        let p = TemperatureParams::from_b(0.1, InitialStateMode::Exact).unwrap();
        let reports: Vec<_> = (0..10).map(|i| report(i as f64 * 0.1, 150.0, 101)).collect();
        let sweep = time_average_max_entangled(&reports, &p).unwrap();
        assert_eq!(sweep.avg_max_entangled, 2.0);
        assert_eq!(sweep.peak_fq, 150.0);
        assert_eq!(sweep.points, 10);
        assert!(matches!(time_average_max_entangled(&[], &p), Err(Error::EmptyReports)));
    }

    #[test]
    fn span_skips_initial_rise() {
        let fq = [0.0, 500.0, 3000.0, 2000.0, 4000.0, 2500.0, 3500.0];
        let reports: Vec<_> = fq
            .iter()
            .enumerate()
            .map(|(i, &f)| report(0.1 * i as f64, f, 101))
            .collect();
        let (lo, hi) = cluster_span(&reports, 0.25).unwrap();
        assert_eq!(lo, certify_cluster(2000.0, 101));
        assert_eq!(hi, certify_cluster(4000.0, 101));
        assert_eq!(cluster_span(&reports, 0.0), Some((1, hi)));
        assert_eq!(cluster_span(&reports, 10.0), Some((1, hi)));
        assert_eq!(cluster_span(&[], 0.0), None);
    }

    proptest! {
        #[test]
        fn certification_monotone(n in 2usize..200, a in 0.0f64..40000.0, b in 0.0f64..40000.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(certify_cluster(lo, n) <= certify_cluster(hi, n));
            prop_assert!(certify_cluster(hi, n) >= 1 && certify_cluster(hi, n) <= n);
        }

        #[test]
        fn strict_inequality_semantics(n in 2usize..200, k_frac in 0.0f64..1.0) {
            let k = 1 + ((n - 2) as f64 * k_frac) as usize;
            let b = entanglement_bound(n, k).unwrap() as f64;
            prop_assert!(certify_cluster(b + 1e-9, n) > k);
        }
    }
}
