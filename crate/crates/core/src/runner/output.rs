//! CSV tables with JSON metadata sidecars.

use crate::dynamics::{CoherenceSpectrum, InitialStateMode};
use crate::error::Result;
use crate::metrics::{EntanglementReport, SweepResult};
use crate::PhysicalConstants;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Intensities below this are treated as absent when choosing CSV columns.
pub const COLUMN_THRESHOLD: f64 = 1e-15;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Everything needed to recompute one `simulate` CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub code_version: String,
    pub spins: usize,
    pub t_kelvin: Option<f64>,
    pub b: f64,
    pub mode: InitialStateMode,
    pub constants: PhysicalConstants,
    /// ħD/k_B, K.
    pub dipolar_kelvin: f64,
    pub tau_start: f64,
    pub tau_stop: f64,
    pub tau_step: f64,
    pub points: usize,
    /// Tr{ρ_i²}; multiply intensities by it to undo the normalization.
    pub normalization: f64,
    pub log_partition: f64,
    /// Non-negative even orders listed as `J_n` columns; J_{-n} = J_n.
    pub orders: Vec<i32>,
    pub conventions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_unix_time: Option<u64>,
}

pub fn conventions() -> Vec<String> {
    vec![
        "J_n normalized by Tr{rho_i^2}; FQ_lower = 2*M2 with M2 = sum_n n^2 J_n over both signs".into(),
        "max_entangled_spins = 1 + max{k : FQ_lower > B(N,k)}, 1 when no bound is exceeded".into(),
        "time averages count points without certified entanglement as cluster size 1".into(),
    ]
}

pub fn unix_time() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Even non-negative orders up to the largest one populated anywhere in the run.
pub fn populated_orders(spectra: &[CoherenceSpectrum]) -> Vec<i32> {
    let top = spectra
        .iter()
        .flat_map(|s| {
            s.orders()
                .filter(|&(n, v)| n >= 0 && v > COLUMN_THRESHOLD)
                .map(|(n, _)| n)
        })
        .max()
        .unwrap_or(0);
    (0..=top).step_by(2).collect()
}

/// Rows `D_tau, J_0, J_2, ..., M2, FQ_lower, max_entangled_spins`.
pub fn simulation_csv(spectra: &[CoherenceSpectrum], reports: &[EntanglementReport], orders: &[i32]) -> String {
    let mut out = String::from("D_tau");
    for n in orders {
        let _ = write!(out, ",J_{n}");
    }
    out.push_str(",M2,FQ_lower,max_entangled_spins\n");
    for (s, r) in spectra.iter().zip(reports) {
        out.push_str(&fmt_f64(s.time));
        for &n in orders {
            out.push(',');
            out.push_str(&fmt_f64(s.j(n)));
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            fmt_f64(r.m2),
            fmt_f64(r.fq_lower),
            r.max_entangled_spins
        );
    }
    out
}

pub fn sweep_csv(results: &[SweepResult]) -> String {
    let mut out = String::from("N,T_kelvin,b,avg_max_entangled,peak_fq\n");
    for r in results {
        let t = r.t_kelvin.map_or_else(|| "NaN".to_string(), fmt_f64);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.spins,
            t,
            fmt_f64(r.b),
            fmt_f64(r.avg_max_entangled),
            fmt_f64(r.peak_fq)
        );
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}
