//! Dipolar ordered initial state, unitary evolution of each parity chain under
//! the two-quantum Hamiltonian, and readout of the normalized coherence
//! intensities.
//!
//! Time is the dimensionless product Dτ throughout.

use crate::error::{Error, Result};
use crate::sector::{build_chains, dipolar_energy, enumerate_sectors, HalfInt, ParityChain, SpinCount};
use crate::tridiag::TridiagEigen;
use crate::PhysicalConstants;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Tolerance beyond which a violated sum rule is reported as an error.
pub const SUM_RULE_FATAL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialStateMode {
    /// ρ ∝ exp(b·H_dz/D).
    #[default]
    Exact,
    /// ρ ∝ 1 + b·H_dz/D.
    Linearized,
}

impl std::str::FromStr for InitialStateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" | "exact-exponential" => Ok(Self::Exact),
            "linearized" | "linear" => Ok(Self::Linearized),
            other => Err(Error::Config(format!("unknown initial-state mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for InitialStateMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Linearized => "linearized",
        })
    }
}

/// Inverse dipolar temperature and initial-state model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemperatureParams {
    /// b = ħD/(k_B T).
    pub b: f64,
    pub t_kelvin: Option<f64>,
    pub mode: InitialStateMode,
}

impl TemperatureParams {
    pub fn from_b(b: f64, mode: InitialStateMode) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::Config(format!(
                "inverse temperature b must be finite and >= 0, got {b}"
            )));
        }
        Ok(Self {
            b,
            t_kelvin: None,
            mode,
        })
    }

    pub fn from_kelvin(t_kelvin: f64, constants: &PhysicalConstants, mode: InitialStateMode) -> Result<Self> {
        if !(t_kelvin.is_finite() && t_kelvin > 0.0) {
            return Err(Error::Config(format!("temperature must be positive, got {t_kelvin} K")));
        }
        Ok(Self {
            b: constants.b_from_kelvin(t_kelvin),
            t_kelvin: Some(t_kelvin),
            mode,
        })
    }
}

/// Unnormalized diagonal weight of |S, M⟩ in the initial density matrix.
pub fn initial_weight(s: HalfInt, m: HalfInt, params: &TemperatureParams) -> f64 {
    debug_assert!(m.twice().abs() <= s.twice());
    let x = params.b * dipolar_energy(s, m);
    match params.mode {
        InitialStateMode::Exact => x.exp(),
        InitialStateMode::Linearized => 1.0 + x,
    }
}

/// Whether the linearized weight stays inside its validity domain, |b·S²| <= 0.1.
pub fn linearization_valid(b: f64, s: HalfInt) -> bool {
    let sv = s.value();
    (b * sv * sv).abs() <= 0.1
}

/// Density-matrix block of one parity chain of one sector, with the chain's
/// eigen-propagator.
#[derive(Clone, Debug)]
pub struct BlockState {
    pub chain: ParityChain,
    /// Number of identical copies of this block in the full space.
    pub multiplicity: f64,
    /// Time Dτ at which `rho_re`/`rho_im` are evaluated.
    pub time: f64,
    pub rho_re: DMatrix<f64>,
    pub rho_im: DMatrix<f64>,
    initial_diag: DVector<f64>,
    eigen: TridiagEigen,
    /// Initial state in the eigenbasis, Vᵀ ρ(0) V.
    rho_eig: DMatrix<f64>,
}

impl BlockState {
    /// `weights` are the already-normalized diagonal entries of ρ_i on this chain.
    pub fn new(chain: ParityChain, multiplicity: f64, weights: Vec<f64>) -> Self {
        let d = chain.len();
        let eigen = TridiagEigen::new(&vec![0.0; d], &chain.h_mq_offdiag);
        let initial_diag = DVector::from_vec(weights);
        let v = &eigen.eigenvectors;
        let rho_eig = v.transpose() * DMatrix::from_diagonal(&initial_diag) * v;
        Self {
            chain,
            multiplicity,
            time: 0.0,
            rho_re: DMatrix::from_diagonal(&initial_diag),
            rho_im: DMatrix::zeros(d, d),
            initial_diag,
            eigen,
            rho_eig,
        }
    }

    pub fn dim(&self) -> usize {
        self.chain.len()
    }

    pub fn eigen(&self) -> &TridiagEigen {
        &self.eigen
    }

    pub fn initial_diagonal(&self) -> &DVector<f64> {
        &self.initial_diag
    }

    /// State at absolute time `t`, computed directly from ρ(0).
    pub fn at_time(&self, t: f64) -> Self {
        let (rho_re, rho_im) = self.evolved(t);
        Self {
            time: t,
            rho_re,
            rho_im,
            ..self.clone()
        }
    }

    /// Advance by `d_tau` (non-negative).
    pub fn propagate(&self, d_tau: f64) -> Self {
        debug_assert!(d_tau >= 0.0);
        self.at_time(self.time + d_tau)
    }

    /// ρ(t) = W ρ̃ W† with W = V·diag(e^{-iλt}), split into real and imaginary parts.
    fn evolved(&self, t: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let d = self.dim();
        if t == 0.0 || d == 1 {
            return (DMatrix::from_diagonal(&self.initial_diag), DMatrix::zeros(d, d));
        }
        let v = &self.eigen.eigenvectors;
        let mut vc = v.clone();
        let mut vs = v.clone();
        for (j, &lam) in self.eigen.eigenvalues.iter().enumerate() {
            let (sin, cos) = (lam * t).sin_cos();
            vc.column_mut(j).scale_mut(cos);
            vs.column_mut(j).scale_mut(sin);
        }
        let a = &vc * &self.rho_eig;
        let b = &vs * &self.rho_eig;
        let re = &a * vc.transpose() + &b * vs.transpose();
        let im = &a * vs.transpose() - &b * vc.transpose();
        (re, im)
    }

    pub fn rho(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            Complex64::new(self.rho_re[(i, j)], self.rho_im[(i, j)])
        })
    }

    pub fn trace(&self) -> f64 {
        self.rho_re.trace()
    }

    /// Σ |ρ_{ij}|² grouped by signed chain-index difference `i - j`; entry
    /// `k + d - 1` holds difference `k`. Difference `k` is coherence order 2k.
    /// ρ is Hermitian, so the ±k sums agree up to rounding; both get their
    /// mean, making J_n = J_{-n} exact.
    pub fn order_weights(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; 2 * d - 1];
        for j in 0..d {
            for i in 0..d {
                let re = self.rho_re[(i, j)];
                let im = self.rho_im[(i, j)];
                out[i + d - 1 - j] += re * re + im * im;
            }
        }
        for k in 1..d {
            let mean = 0.5 * (out[d - 1 + k] + out[d - 1 - k]);
            out[d - 1 + k] = mean;
            out[d - 1 - k] = mean;
        }
        out
    }
}

/// Normalized intensities J_n at one time point, for orders -N..=N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSpectrum {
    pub time: f64,
    pub max_order: usize,
    /// J_n at index `n + max_order`.
    pub intensities: Vec<f64>,
    /// Tr{ρ_i²}, the denominator of every J_n.
    pub normalization: f64,
}

impl CoherenceSpectrum {
    pub fn zeros(time: f64, max_order: usize, normalization: f64) -> Self {
        Self {
            time,
            max_order,
            intensities: vec![0.0; 2 * max_order + 1],
            normalization,
        }
    }

    pub fn j(&self, n: i32) -> f64 {
        let idx = n + self.max_order as i32;
        if idx < 0 || idx as usize >= self.intensities.len() {
            0.0
        } else {
            self.intensities[idx as usize]
        }
    }

    pub fn j_mut(&mut self, n: i32) -> &mut f64 {
        let idx = (n + self.max_order as i32) as usize;
        &mut self.intensities[idx]
    }

    pub fn orders(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        let m = self.max_order as i32;
        self.intensities
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i32 - m, v))
    }

    pub fn sum(&self) -> f64 {
        self.intensities.iter().sum()
    }

    pub fn max_odd(&self) -> f64 {
        self.orders()
            .filter(|(n, _)| n % 2 != 0)
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max)
    }

    /// Σ n² J_n.
    pub fn second_moment(&self) -> f64 {
        self.orders().map(|(n, v)| f64::from(n * n) * v).sum()
    }

    pub fn check_sum_rule(&self) -> Result<()> {
        let sum = self.sum();
        let deviation = (sum - 1.0).abs();
        if !(deviation <= SUM_RULE_FATAL) {
            return Err(Error::SumRule { sum, deviation });
        }
        Ok(())
    }
}

/// Initial blocks plus the scalars needed to normalize them.
#[derive(Clone, Debug)]
pub struct InitialState {
    pub blocks: Vec<BlockState>,
    /// Tr{ρ_i²}.
    pub purity: f64,
    /// ln Z of the (unscaled) weights.
    pub log_partition: f64,
}

/// Which parity chains are propagated. For odd N the two chains of a sector
/// are mirror images, so one of them with doubled multiplicity is equivalent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainSelection {
    #[default]
    Both,
    MirrorDoubled,
}

/// Builds ρ_i blocks normalized to unit total trace.
pub fn build_initial_state(
    spins: SpinCount,
    params: &TemperatureParams,
    selection: ChainSelection,
) -> Result<InitialState> {
    if selection == ChainSelection::MirrorDoubled && !spins.is_odd() {
        return Err(Error::Config("mirror doubling requires odd N".into()));
    }
    let sectors = enumerate_sectors(spins);
    let s_max = sectors[0].s;
    if params.mode == InitialStateMode::Linearized && !linearization_valid(params.b, s_max) {
        log::warn!(
            "linearized initial state outside its validity domain: b·S² = {:.3e} > 0.1",
            params.b * s_max.value() * s_max.value()
        );
    }
    // exponent shift so the largest exact weight is 1
    let shift = match params.mode {
        InitialStateMode::Exact => params.b * dipolar_energy(s_max, s_max),
        InitialStateMode::Linearized => 0.0,
    };

    let mut raw = Vec::new();
    for sector in &sectors {
        let mult = sector.multiplicity_f64();
        let chains = build_chains(sector);
        let (chains, mult) = match selection {
            ChainSelection::Both => (chains.to_vec(), mult),
            ChainSelection::MirrorDoubled => (vec![chains[0].clone()], 2.0 * mult),
        };
        for chain in chains.into_iter().filter(|c| !c.is_empty()) {
            let weights: Vec<f64> = chain
                .m_values
                .iter()
                .map(|&m| match params.mode {
                    InitialStateMode::Exact => (params.b * dipolar_energy(chain.s, m) - shift).exp(),
                    InitialStateMode::Linearized => initial_weight(chain.s, m, params),
                })
                .collect();
            raw.push((chain, mult, weights));
        }
    }
    let z: f64 = raw.iter().map(|(_, mult, w)| mult * w.iter().sum::<f64>()).sum();
    let purity: f64 = raw
        .iter()
        .map(|(_, mult, w)| mult * w.iter().map(|x| (x / z) * (x / z)).sum::<f64>())
        .sum();
    let blocks = raw
        .into_iter()
        .map(|(chain, mult, w)| BlockState::new(chain, mult, w.into_iter().map(|x| x / z).collect()))
        .collect();
    Ok(InitialState {
        blocks,
        purity,
        log_partition: shift + z.ln(),
    })
}

/// Combines blocks evaluated at a common time into normalized intensities.
/// Blocks are reduced in slice order.
pub fn coherence_spectrum(blocks: &[BlockState], purity: f64, max_order: usize) -> Result<CoherenceSpectrum> {
    let time = blocks.first().map_or(0.0, |b| b.time);
    if let Some(b) = blocks.iter().find(|b| b.time != time) {
        return Err(Error::Consistency(format!(
            "blocks evaluated at different times ({time} and {})",
            b.time
        )));
    }
    let contributions: Vec<Vec<f64>> = blocks.iter().map(BlockState::order_weights).collect();
    let spectrum = reduce(blocks, &contributions, time, purity, max_order);
    spectrum.check_sum_rule()?;
    Ok(spectrum)
}

fn reduce(
    blocks: &[BlockState],
    contributions: &[Vec<f64>],
    time: f64,
    purity: f64,
    max_order: usize,
) -> CoherenceSpectrum {
    let mut spectrum = CoherenceSpectrum::zeros(time, max_order, purity);
    for (block, weights) in blocks.iter().zip(contributions) {
        let d = block.dim() as i32;
        for (idx, w) in weights.iter().enumerate() {
            let n = 2 * (idx as i32 - (d - 1));
            *spectrum.j_mut(n) += block.multiplicity * w / purity;
        }
    }
    spectrum
}

/// Block-diagonal MQ simulation of N spins.
#[derive(Clone, Debug)]
pub struct BlockSimulation {
    pub spins: SpinCount,
    pub params: TemperatureParams,
    pub selection: ChainSelection,
    pub initial: InitialState,
}

impl BlockSimulation {
    pub fn new(spins: SpinCount, params: TemperatureParams) -> Result<Self> {
        Self::with_selection(spins, params, ChainSelection::Both)
    }

    pub fn with_selection(spins: SpinCount, params: TemperatureParams, selection: ChainSelection) -> Result<Self> {
        let initial = build_initial_state(spins, &params, selection)?;
        Ok(Self {
            spins,
            params,
            selection,
            initial,
        })
    }

    pub fn purity(&self) -> f64 {
        self.initial.purity
    }

    pub fn blocks_at(&self, t: f64) -> Vec<BlockState> {
        self.initial.blocks.iter().map(|b| b.at_time(t)).collect()
    }

    pub fn spectrum_at(&self, t: f64) -> Result<CoherenceSpectrum> {
        coherence_spectrum(&self.blocks_at(t), self.initial.purity, self.spins.get())
    }

    /// Spectra on a time grid, parallel over time points. Each point reduces
    /// its blocks in a fixed order, so the output does not depend on scheduling.
    pub fn spectra(&self, times: &[f64]) -> Result<Vec<CoherenceSpectrum>> {
        times.par_iter().map(|&t| self.spectrum_at(t)).collect()
    }

    /// Tr{ρ²(τ)} summed over all blocks.
    pub fn purity_at(&self, t: f64) -> f64 {
        self.blocks_at(t)
            .iter()
            .map(|b| b.multiplicity * b.order_weights().iter().sum::<f64>())
            .sum()
    }
}
