//! Acceptance gate. Each test prints one `PASS`/`FAIL` line and fails when
//! its criterion is not met. Tests hold a shared lock so the runtime limits
//! are measured without contention from each other.

use mqnmr::metrics::{cluster_span, time_average_max_entangled, SPAN_SETTLE_TIME};
use mqnmr::oracle::{bj_state, coherences_via_phase, BJParams, BJWorkspace, DenseSimulation};
use mqnmr::{
    linspace, time_grid, BlockSimulation, CoherenceSpectrum, EntanglementReport, InitialStateMode, PhysicalConstants,
    SpinCount, TemperatureParams,
};
use rand::{Rng, SeedableRng};
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(name: &str, pass: bool, detail: String) {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

fn exact(b: f64) -> TemperatureParams {
    TemperatureParams::from_b(b, InitialStateMode::Exact).unwrap()
}

fn block(n: usize, params: TemperatureParams) -> BlockSimulation {
    BlockSimulation::new(SpinCount::new(n).unwrap(), params).unwrap()
}

fn max_diff(a: &CoherenceSpectrum, b: &CoherenceSpectrum, n: usize) -> f64 {
    (-(n as i32)..=n as i32)
        .map(|k| (a.j(k) - b.j(k)).abs())
        .fold(0.0, f64::max)
}

fn reports(n: usize, params: TemperatureParams, times: &[f64]) -> Vec<EntanglementReport> {
    block(n, params)
        .spectra(times)
        .unwrap()
        .iter()
        .map(|s| EntanglementReport::from_spectrum(s, n))
        .collect()
}

#[test]
fn three_spin_closed_form() {
    let _guard = serial();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for b in [0.01, 0.5, 2.0] {
        let sim = block(3, exact(b));
        for t in linspace(0.0, 3.0, 300) {
            let s = sim.spectrum_at(t).unwrap();
            let envelope = (1.5 * b).tanh().powi(2) * (3f64.sqrt() * t).sin().powi(2);
            let expected = |k: i32| match k.abs() {
                0 => 1.0 - 0.5 * envelope,
                2 => 0.25 * envelope,
                _ => 0.0,
            };
            for k in -3..=3 {
                worst = worst.max((s.j(k) - expected(k)).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "three-spin analytic match",
        worst <= 1e-10 && elapsed < Duration::from_secs(1),
        format!("max |dJ| = {worst:.2e} (<= 1e-10), {elapsed:.2?} (< 1 s)"),
    );
}

/// Sum-rule and selection-rule runs share their spectra.
fn sum_rule_runs() -> (f64, f64, Duration) {
    let start = Instant::now();
    let (mut sum_dev, mut odd): (f64, f64) = (0.0, 0.0);
    for n in [3, 5, 7, 51, 101] {
        for b in [0.0, 0.01, 1.0] {
            for s in block(n, exact(b)).spectra(&linspace(0.0, 3.0, 50)).unwrap() {
                sum_dev = sum_dev.max((s.sum() - 1.0).abs());
                odd = odd.max(s.max_odd());
            }
        }
    }
    (sum_dev, odd, start.elapsed())
}

#[test]
fn sum_rule() {
    let _guard = serial();
    let (dev, _, elapsed) = sum_rule_runs();
    verdict(
        "sum rule",
        dev <= 1e-12 && elapsed < Duration::from_secs(30),
        format!("max |sum J_n - 1| = {dev:.2e} (<= 1e-12), {elapsed:.2?} (< 30 s)"),
    );
}

#[test]
fn selection_rule() {
    let _guard = serial();
    let (_, odd, _) = sum_rule_runs();
    verdict(
        "selection rule",
        odd < 1e-14,
        format!("max odd-order |J_n| = {odd:.2e} (< 1e-14)"),
    );
}

#[test]
fn oracle_equivalence() {
    let _guard = serial();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [3, 5, 7] {
        for b in [0.0, 0.1, 1.0] {
            let sim = block(n, exact(b));
            let dense = DenseSimulation::new(n, &exact(b)).unwrap();
            for t in [0.3, 1.0, 2.7] {
                let a = sim.spectrum_at(t).unwrap();
                let d = dense.spectrum_at(t);
                let p = coherences_via_phase(n, &exact(b), t, 2 * n + 2).unwrap();
                worst = worst
                    .max(max_diff(&a, &d, n))
                    .max(max_diff(&a, &p, n))
                    .max(max_diff(&d, &p, n));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "oracle equivalence",
        worst <= 1e-8 && elapsed < Duration::from_secs(60),
        format!("max pairwise |dJ| = {worst:.2e} (<= 1e-8), {elapsed:.2?} (< 1 min)"),
    );
}

#[test]
fn second_moment_identity() {
    let _guard = serial();
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        for b in [0.0, 0.1, 1.0] {
            let sim = block(n, exact(b));
            let dense = DenseSimulation::new(n, &exact(b)).unwrap();
            for t in [0.3, 1.0, 2.7] {
                let m2 = sim.spectrum_at(t).unwrap().second_moment();
                worst = worst.max((m2 - dense.second_moment_direct(t)).abs());
            }
        }
    }
    verdict(
        "second-moment identity",
        worst <= 1e-10,
        format!("max |dM2| = {worst:.2e} (<= 1e-10)"),
    );
}

#[test]
fn fisher_bound_panels_at_101_spins() {
    let _guard = serial();
    let start = Instant::now();
    let constants = PhysicalConstants::default();
    let times = time_grid(0.0, 3.0, 0.01);
    let at = |t_kelvin: f64| {
        let params = TemperatureParams::from_kelvin(t_kelvin, &constants, InitialStateMode::Exact).unwrap();
        reports(101, params, &times)
    };

    let mut failures = Vec::new();
    let mut summary = Vec::new();
    let pair = at(6.0e-4);
    let pair_max = pair.iter().map(|r| r.max_entangled_spins).max().unwrap();
    summary.push(format!("6e-4 K max {pair_max} (want 2)"));
    if pair_max != 2 {
        failures.push("6e-4 K");
    }
    for (t, lo, hi, label) in [
        (3.2e-4, 20, 47, "3.2e-4 K"),
        (1.6e-4, 19, 87, "1.6e-4 K"),
        (4.8e-5, 11, 92, "4.8e-5 K"),
    ] {
        let (got_lo, got_hi) = cluster_span(&at(t), SPAN_SETTLE_TIME).unwrap();
        summary.push(format!("{label} {got_lo}-{got_hi} (want {lo}-{hi})"));
        if got_lo.abs_diff(lo) > 2 || got_hi.abs_diff(hi) > 2 {
            failures.push(label);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "entangled-cluster spans at N = 101",
        failures.is_empty() && elapsed < Duration::from_secs(60),
        format!(
            "hbar D / k_B = {:.4e} K; {}; {elapsed:.2?} (< 1 min)",
            constants.dipolar_kelvin(),
            summary.join(", ")
        ),
    );
}

/// Averages on the 8-point log temperature grid, rows per N.
fn sweep_table(constants: &PhysicalConstants) -> (Vec<f64>, Vec<(usize, Vec<f64>)>) {
    let temps: Vec<f64> = linspace(4.8e-5f64.ln(), 6.0e-4f64.ln(), 8)
        .into_iter()
        .map(f64::exp)
        .collect();
    let times = time_grid(0.0, 3.0, 0.01);
    let rows = [51, 75, 101]
        .into_iter()
        .map(|n| {
            let avgs = temps
                .iter()
                .map(|&t| {
                    let params = TemperatureParams::from_kelvin(t, constants, InitialStateMode::Exact).unwrap();
                    time_average_max_entangled(&reports(n, params, &times), &params)
                        .unwrap()
                        .avg_max_entangled
                })
                .collect();
            (n, avgs)
        })
        .collect();
    (temps, rows)
}

#[test]
fn cluster_average_monotonicity() {
    let _guard = serial();
    let start = Instant::now();
    let (_, rows) = sweep_table(&PhysicalConstants::default());
    let decreasing_in_t = rows.iter().all(|(_, a)| a.windows(2).all(|w| w[1] < w[0]));
    let increasing_in_n = (0..rows[0].1.len()).all(|j| rows.windows(2).all(|w| w[1].1[j] > w[0].1[j]));
    let elapsed = start.elapsed();
    let table: Vec<String> = rows
        .iter()
        .map(|(n, a)| {
            format!(
                "N={n} [{}]",
                a.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(" ")
            )
        })
        .collect();
    verdict(
        "cluster-average monotonicity",
        decreasing_in_t && increasing_in_n && elapsed < Duration::from_secs(180),
        format!(
            "strictly decreasing in T: {decreasing_in_t}, strictly increasing in N: {increasing_in_n}; {}; {elapsed:.2?} (< 3 min)",
            table.join("; ")
        ),
    );
}

#[test]
fn two_pulse_preparation() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = rand::rngs::StdRng::seed_from_u64(2020);
    let (mut zeeman, mut alpha, mut consistency): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 2..=8 {
        let ws = BJWorkspace::new(n).unwrap();
        for draw in 0..50 {
            let p = BJParams {
                spins: n,
                a: rng.gen_range(0.0..=100.0),
                theta: rng.gen_range(0.0..=std::f64::consts::PI),
                tau: rng.gen_range(0.0..=5.0),
            };
            let out = ws.outcome(&p).unwrap();
            zeeman = zeeman.max(out.zeeman_relative);
            alpha = alpha.max(out.alpha_extracted.abs());
            // the factored propagator against the pulse-by-pulse product
            if draw < 3 {
                let sigma = bj_state(&ws.ops, &p).unwrap();
                consistency = consistency.max((out.zeeman_trace - (&ws.ops.iz * &sigma).trace().re).abs());
            }
        }
    }
    let ws = BJWorkspace::new(4).unwrap();
    let beta = linspace(0.0, 5.0, 51)
        .into_iter()
        .map(|tau| {
            ws.outcome(&BJParams {
                spins: 4,
                a: 40.0,
                theta: std::f64::consts::FRAC_PI_4,
                tau,
            })
            .unwrap()
            .beta_extracted
            .abs()
        })
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    verdict(
        "two-pulse preparation",
        zeeman <= 1e-12 && alpha <= 1e-10 && beta > 1e-6 && consistency <= 1e-12 && elapsed < Duration::from_secs(60),
        format!(
            "max relative Zeeman trace {zeeman:.2e} (<= 1e-12), max |alpha| {alpha:.2e} (<= 1e-10), \
             max |beta| at a=40 {beta:.3} (> 0), route mismatch {consistency:.1e}, {elapsed:.2?} (< 1 min)"
        ),
    );
}

#[test]
fn deterministic_output() {
    let _guard = serial();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let csv: Vec<Vec<u8>> = dirs
        .iter()
        .map(|d| {
            let status = Command::new(env!("CARGO_BIN_EXE_mqnmr"))
                .args([
                    "simulate",
                    "--n",
                    "51",
                    "--temp-kelvin",
                    "3.2e-4",
                    "--deterministic",
                    "--out",
                ])
                .arg(d.path())
                .status()
                .unwrap();
            assert!(status.success());
            std::fs::read(d.path().join("simulate_N51_T3.2e-4.csv")).unwrap()
        })
        .collect();
    let sidecars: Vec<Vec<u8>> = dirs
        .iter()
        .map(|d| std::fs::read(d.path().join("simulate_N51_T3.2e-4.json")).unwrap())
        .collect();
    verdict(
        "determinism",
        !csv[0].is_empty() && csv[0] == csv[1] && sidecars[0] == sidecars[1],
        format!("{} CSV bytes, identical: {}", csv[0].len(), csv[0] == csv[1]),
    );
}
