use super::config::{RunConfig, Temperature};
use super::output::{
    conventions, populated_orders, simulation_csv, sweep_csv, unix_time, write_json, write_text, RunMetadata,
};
use crate::dynamics::{BlockSimulation, CoherenceSpectrum, TemperatureParams};
use crate::error::{Error, Result};
use crate::metrics::{bound_table, time_average_max_entangled, EntanglementReport, SweepResult};
use crate::oracle::{coherences_via_phase, BJParams, BJWorkspace, DenseSimulation};
use crate::sector::SpinCount;
use crate::three_spin::{j0_analytic, j2_analytic};
use crate::{linspace, PhysicalConstants};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Coherence spectra and entanglement reports of one (N, T) point.
#[derive(Clone, Debug)]
pub struct SimulationRun {
    pub spectra: Vec<CoherenceSpectrum>,
    pub reports: Vec<EntanglementReport>,
    pub purity: f64,
    pub log_partition: f64,
}

/// Block simulation of `spins` over `times`. Fails on a sum-rule violation or
/// a Fisher bound above N².
pub fn simulate_point(spins: usize, params: &TemperatureParams, times: &[f64]) -> Result<SimulationRun> {
    let sim = BlockSimulation::new(SpinCount::new(spins)?, *params)?;
    let spectra = sim.spectra(times)?;
    let reports: Vec<EntanglementReport> = spectra
        .iter()
        .map(|s| EntanglementReport::from_spectrum(s, spins))
        .collect();
    if let Some(r) = reports.iter().find(|r| !r.within_heisenberg_cap()) {
        return Err(Error::Consistency(format!(
            "F_Q lower bound {} exceeds N² at Dτ = {}",
            r.fq_lower, r.time
        )));
    }
    Ok(SimulationRun {
        spectra,
        reports,
        purity: sim.purity(),
        log_partition: sim.initial.log_partition,
    })
}

fn metadata(
    cfg: &RunConfig,
    spins: usize,
    params: &TemperatureParams,
    run: &SimulationRun,
    orders: &[i32],
) -> RunMetadata {
    let constants = cfg.constants();
    RunMetadata {
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        spins,
        t_kelvin: params.t_kelvin,
        b: params.b,
        mode: params.mode,
        constants,
        dipolar_kelvin: constants.dipolar_kelvin(),
        tau_start: cfg.tau_start,
        tau_stop: cfg.tau_stop,
        tau_step: cfg.tau_step,
        points: run.spectra.len(),
        normalization: run.purity,
        log_partition: run.log_partition,
        orders: orders.to_vec(),
        conventions: conventions(),
        generated_unix_time: (!cfg.deterministic).then(unix_time),
    }
}

pub fn simulation_file_stem(spins: usize, temp: &Temperature) -> String {
    format!("simulate_N{spins}_{}", temp.label())
}

/// One CSV plus JSON sidecar per (N, T). Returns the CSV paths.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    cfg.validate(true)?;
    let temps = cfg.temperature_params()?;
    if temps.is_empty() {
        return Err(Error::Config("simulate needs --temp-kelvin or --b".into()));
    }
    let times = cfg.times();
    let mut written = Vec::new();
    for &spins in &cfg.spins {
        for (temp, params) in &temps {
            let run = simulate_point(spins, params, &times)?;
            let orders = populated_orders(&run.spectra);
            let stem = simulation_file_stem(spins, temp);
            let csv_path = cfg.out_dir.join(format!("{stem}.csv"));
            write_text(&csv_path, &simulation_csv(&run.spectra, &run.reports, &orders))?;
            write_json(
                &cfg.out_dir.join(format!("{stem}.json")),
                &metadata(cfg, spins, params, &run, &orders),
            )?;
            log::info!("wrote {}", csv_path.display());
            written.push(csv_path);
        }
    }
    Ok(written)
}

/// Recomputes a `simulate` CSV from its sidecar alone.
pub fn rerun_from_sidecar(path: &Path) -> Result<String> {
    let meta: RunMetadata = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let params = TemperatureParams {
        b: meta.b,
        t_kelvin: meta.t_kelvin,
        mode: meta.mode,
    };
    let times = crate::time_grid(meta.tau_start, meta.tau_stop, meta.tau_step);
    let run = simulate_point(meta.spins, &params, &times)?;
    Ok(simulation_csv(&run.spectra, &run.reports, &meta.orders))
}

/// Log-spaced temperatures used by `sweep` when none are given.
pub fn default_sweep_temperatures() -> Vec<Temperature> {
    let (lo, hi, count) = (1.0e-5f64, 1.0e-3f64, 16);
    linspace(lo.ln(), hi.ln(), count)
        .into_iter()
        .map(|x| Temperature::Kelvin(x.exp()))
        .collect()
}

pub fn sweep_point(spins: usize, params: &TemperatureParams, times: &[f64]) -> Result<SweepResult> {
    let run = simulate_point(spins, params, times)?;
    time_average_max_entangled(&run.reports, params)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SweepMetadata {
    code_version: String,
    mode: crate::dynamics::InitialStateMode,
    constants: PhysicalConstants,
    dipolar_kelvin: f64,
    tau_start: f64,
    tau_stop: f64,
    tau_step: f64,
    spins: Vec<usize>,
    temperatures: Vec<Temperature>,
    default_temperature_grid: bool,
    conventions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix_time: Option<u64>,
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Time-averaged certified cluster size over the full N × T grid, rows in
/// N-major order. Writes `sweep.csv` and `sweep.json`.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<(PathBuf, Vec<SweepResult>)> {
    cfg.validate(true)?;
    let default_grid = cfg.temperatures.is_empty();
    let mut cfg = cfg.clone();
    if default_grid {
        cfg.temperatures = default_sweep_temperatures();
    }
    let temps = cfg.temperature_params()?;
    let times = cfg.times();
    let grid: Vec<(usize, TemperatureParams)> = cfg
        .spins
        .iter()
        .flat_map(|&n| temps.iter().map(move |(_, p)| (n, *p)))
        .collect();
    let pool = thread_pool(cfg.jobs)?;
    let results: Vec<SweepResult> = pool.install(|| {
        grid.par_iter()
            .map(|(n, p)| sweep_point(*n, p, &times))
            .collect::<Result<_>>()
    })?;

    let path = cfg.out_dir.join("sweep.csv");
    write_text(&path, &sweep_csv(&results))?;
    let constants = cfg.constants();
    write_json(
        &cfg.out_dir.join("sweep.json"),
        &SweepMetadata {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            mode: cfg.mode,
            constants,
            dipolar_kelvin: constants.dipolar_kelvin(),
            tau_start: cfg.tau_start,
            tau_stop: cfg.tau_stop,
            tau_step: cfg.tau_step,
            spins: cfg.spins.clone(),
            temperatures: cfg.temperatures.clone(),
            default_temperature_grid: default_grid,
            conventions: conventions(),
            generated_unix_time: (!cfg.deterministic).then(unix_time),
        },
    )?;
    Ok((path, results))
}

/// One tolerance check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `true`: pass when value <= threshold; `false`: pass when value > threshold.
    pub at_most: bool,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            at_most: true,
            passed: value <= threshold,
        }
    }

    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            at_most: false,
            passed: value > threshold,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub command: String,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let op = if c.at_most { "<=" } else { ">" };
            let _ = writeln!(
                out,
                "{} {}: {:.3e} {op} {:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.threshold
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{}: {} checks, {failed} failed", self.command, self.checks.len());
        out
    }

    fn write(&self, dir: &Path) -> Result<()> {
        write_json(&dir.join(format!("{}_checks.json", self.command)), self)
    }
}

pub const ORACLE3_TOLERANCE: f64 = 1e-10;
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-8;
pub const SECOND_MOMENT_TOLERANCE: f64 = 1e-10;
pub const ZEEMAN_TRACE_TOLERANCE: f64 = 1e-12;
pub const ALPHA_TOLERANCE: f64 = 1e-10;
/// |β| above this counts as dipolar order having been created.
pub const BETA_NONZERO: f64 = 1e-6;

/// Block method at N = 3 against the closed form, 300 points on the given
/// window. Uses the configured b values, or {0.01, 0.5, 2} when none are set.
pub fn cmd_oracle3(cfg: &RunConfig) -> Result<CheckReport> {
    let mut bs: Vec<f64> = cfg.temperature_params()?.iter().map(|(_, p)| p.b).collect();
    if bs.is_empty() {
        bs = vec![0.01, 0.5, 2.0];
    }
    let times = linspace(cfg.tau_start, cfg.tau_stop, 300);
    let mut csv = String::from("b,D_tau,J_0,J_2,J_0_analytic,J_2_analytic\n");
    let mut report = CheckReport {
        command: "oracle3".into(),
        checks: Vec::new(),
    };
    for b in bs {
        let params = TemperatureParams::from_b(b, crate::InitialStateMode::Exact)?;
        let sim = BlockSimulation::new(SpinCount::new(3)?, params)?;
        let mut worst = 0.0f64;
        for sp in sim.spectra(&times)? {
            let (a0, a2) = (j0_analytic(b, sp.time), j2_analytic(b, sp.time));
            let dev = [(sp.j(0) - a0).abs(), (sp.j(2) - a2).abs(), (sp.j(-2) - a2).abs()]
                .into_iter()
                .chain(sp.orders().filter(|(n, _)| n.abs() > 2).map(|(_, v)| v.abs()))
                .fold(0.0, f64::max);
            worst = worst.max(dev);
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                super::fmt_f64(b),
                super::fmt_f64(sp.time),
                super::fmt_f64(sp.j(0)),
                super::fmt_f64(sp.j(2)),
                super::fmt_f64(a0),
                super::fmt_f64(a2)
            );
        }
        report.checks.push(Check::at_most(
            format!("three-spin max |dJ| at b={b}"),
            worst,
            ORACLE3_TOLERANCE,
        ));
    }
    write_text(&cfg.out_dir.join("oracle3.csv"), &csv)?;
    report.write(&cfg.out_dir)?;
    Ok(report)
}

/// Block vs dense vs φ-Fourier readout, plus the second-moment identity.
/// Uses the configured N (each <= 10) and b values, defaulting to
/// N ∈ {3, 5, 7}, b ∈ {0, 0.1, 1}; Dτ ∈ {0.3, 1.0, 2.7}.
pub fn cmd_oracle_compare(cfg: &RunConfig) -> Result<CheckReport> {
    cfg.validate(false)?;
    let mut bs: Vec<f64> = cfg.temperature_params()?.iter().map(|(_, p)| p.b).collect();
    if bs.is_empty() {
        bs = vec![0.0, 0.1, 1.0];
    }
    let times = [0.3, 1.0, 2.7];
    let mut csv = String::from("N,b,D_tau,block_vs_dense,block_vs_phase,dense_vs_phase,second_moment_identity\n");
    let mut report = CheckReport {
        command: "oracle-compare".into(),
        checks: Vec::new(),
    };
    for &n in &cfg.spins {
        let mut worst = [0.0f64; 4];
        for &b in &bs {
            let params = TemperatureParams::from_b(b, cfg.mode)?;
            let block = BlockSimulation::new(SpinCount::new(n)?, params)?;
            let dense = DenseSimulation::new(n, &params)?;
            for &t in &times {
                let sb = block.spectrum_at(t)?;
                let sd = dense.spectrum_at(t);
                let sp = coherences_via_phase(n, &params, t, 2 * n + 2)?;
                let diff = |x: &CoherenceSpectrum, y: &CoherenceSpectrum| {
                    x.intensities
                        .iter()
                        .zip(&y.intensities)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                };
                let m2 = (sb.second_moment() - dense.second_moment_direct(t)).abs();
                let row = [diff(&sb, &sd), diff(&sb, &sp), diff(&sd, &sp), m2];
                for (w, r) in worst.iter_mut().zip(row) {
                    *w = w.max(r);
                }
                let _ = writeln!(
                    csv,
                    "{n},{},{},{},{},{},{}",
                    super::fmt_f64(b),
                    super::fmt_f64(t),
                    super::fmt_f64(row[0]),
                    super::fmt_f64(row[1]),
                    super::fmt_f64(row[2]),
                    super::fmt_f64(row[3])
                );
            }
        }
        report.checks.extend([
            Check::at_most(format!("N={n} block vs dense"), worst[0], EQUIVALENCE_TOLERANCE),
            Check::at_most(format!("N={n} block vs phase readout"), worst[1], EQUIVALENCE_TOLERANCE),
            Check::at_most(format!("N={n} dense vs phase readout"), worst[2], EQUIVALENCE_TOLERANCE),
            Check::at_most(
                format!("N={n} second-moment identity"),
                worst[3],
                SECOND_MOMENT_TOLERANCE,
            ),
        ]);
    }
    write_text(&cfg.out_dir.join("oracle_compare.csv"), &csv)?;
    report.write(&cfg.out_dir)?;
    Ok(report)
}

/// Outcome of the two-pulse verification at one N.
#[derive(Clone, Debug)]
pub struct BjVerification {
    pub spins: usize,
    pub draws: Vec<(BJParams, crate::oracle::BJOutcome)>,
    /// β along a Dτ scan at a = 40, θ = π/4.
    pub beta_scan: Vec<(f64, f64)>,
}

pub fn bj_verify_spins(spins: usize, draws: usize, seed: u64) -> Result<BjVerification> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed ^ spins as u64);
    let params: Vec<BJParams> = (0..draws)
        .map(|_| BJParams {
            spins,
            a: rng.gen_range(0.0..=100.0),
            theta: rng.gen_range(0.0..=std::f64::consts::PI),
            tau: rng.gen_range(0.0..=5.0),
        })
        .collect();
    let ws = BJWorkspace::new(spins)?;
    let draws = params
        .par_iter()
        .map(|p| Ok((*p, ws.outcome(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let beta_scan = linspace(0.0, 5.0, 51)
        .par_iter()
        .map(|&tau| {
            let p = BJParams {
                spins,
                a: 40.0,
                theta: std::f64::consts::FRAC_PI_4,
                tau,
            };
            Ok((tau, ws.outcome(&p)?.beta_extracted))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BjVerification {
        spins,
        draws,
        beta_scan,
    })
}

/// Zeeman-trace, α and β checks of the two-pulse preparation for each
/// configured N (default 2..=8).
pub fn cmd_bj_verify(cfg: &RunConfig) -> Result<CheckReport> {
    if let Some(&n) = cfg
        .spins
        .iter()
        .find(|&&n| n == 0 || n > crate::oracle::MAX_DENSE_SPINS)
    {
        return Err(Error::DenseTooLarge {
            n,
            max: crate::oracle::MAX_DENSE_SPINS,
        });
    }
    let mut report = CheckReport {
        command: "bj-verify".into(),
        checks: Vec::new(),
    };
    let mut csv = String::from("N,a,theta,D_tau,zeeman_trace,zeeman_relative,dipolar_trace,beta,alpha\n");
    for &n in &cfg.spins {
        let v = bj_verify_spins(n, cfg.draws, cfg.seed)?;
        let worst_z = v.draws.iter().map(|(_, o)| o.zeeman_relative).fold(0.0, f64::max);
        let worst_a = v
            .draws
            .iter()
            .map(|(_, o)| {
                if o.alpha_extracted.is_nan() {
                    f64::INFINITY
                } else {
                    o.alpha_extracted.abs()
                }
            })
            .fold(0.0, f64::max);
        let best_beta = v.beta_scan.iter().map(|(_, b)| b.abs()).fold(0.0, f64::max);
        for (p, o) in &v.draws {
            let _ = writeln!(
                csv,
                "{n},{},{},{},{},{},{},{},{}",
                super::fmt_f64(p.a),
                super::fmt_f64(p.theta),
                super::fmt_f64(p.tau),
                super::fmt_f64(o.zeeman_trace),
                super::fmt_f64(o.zeeman_relative),
                super::fmt_f64(o.dipolar_trace),
                super::fmt_f64(o.beta_extracted),
                super::fmt_f64(o.alpha_extracted)
            );
        }
        report.checks.extend([
            Check::at_most(format!("N={n} relative Zeeman trace"), worst_z, ZEEMAN_TRACE_TOLERANCE),
            Check::at_most(format!("N={n} extracted alpha"), worst_a, ALPHA_TOLERANCE),
            Check::above(format!("N={n} max |beta| at a=40, theta=pi/4"), best_beta, BETA_NONZERO),
        ]);
    }
    write_text(&cfg.out_dir.join("bj_verify.csv"), &csv)?;
    report.write(&cfg.out_dir)?;
    Ok(report)
}

/// `k,bound` rows of B(N, k) for k = 1..=N.
pub fn bound_table_csv(spins: usize) -> Result<String> {
    SpinCount::new(spins)?;
    let mut out = String::from("k,bound\n");
    for (k, b) in bound_table(spins) {
        let _ = writeln!(out, "{k},{b}");
    }
    Ok(out)
}
