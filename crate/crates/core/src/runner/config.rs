//! Run configuration: a flat `key = value` file with `#` comments, overridden
//! by command-line flags.

use crate::dynamics::{InitialStateMode, TemperatureParams};
use crate::error::{Error, Result};
use crate::{time_grid, PhysicalConstants};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "MQNMR_OUT";

/// One temperature point, as given by the user.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Temperature {
    Kelvin(f64),
    B(f64),
}

impl Temperature {
    pub fn params(&self, constants: &PhysicalConstants, mode: InitialStateMode) -> Result<TemperatureParams> {
        match *self {
            Temperature::Kelvin(t) => TemperatureParams::from_kelvin(t, constants, mode),
            Temperature::B(b) => TemperatureParams::from_b(b, mode),
        }
    }

    /// Short label for file names.
    pub fn label(&self) -> String {
        match *self {
            Temperature::Kelvin(t) => format!("T{t:e}"),
            Temperature::B(b) => format!("b{b:e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub spins: Vec<usize>,
    pub temperatures: Vec<Temperature>,
    pub mode: InitialStateMode,
    pub tau_start: f64,
    pub tau_stop: f64,
    pub tau_step: f64,
    pub out_dir: PathBuf,
    /// Worker threads for sweeps; `None` uses the available parallelism.
    pub jobs: Option<usize>,
    /// Omit run timestamps so identical configs give byte-identical files.
    pub deterministic: bool,
    /// Dipolar coupling D/2π in Hz.
    pub coupling_hz: f64,
    /// Larmor frequency ω₀/2π in Hz.
    pub larmor_hz: f64,
    /// Random draws per N for `bj-verify`.
    pub draws: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spins: vec![101],
            temperatures: Vec::new(),
            mode: InitialStateMode::Exact,
            tau_start: 0.0,
            tau_stop: 3.0,
            tau_step: 0.01,
            out_dir: std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("results"), PathBuf::from),
            jobs: None,
            deterministic: false,
            coupling_hz: 1.0e4,
            larmor_hz: 500.0e6,
            draws: 50,
            seed: 2020,
        }
    }
}

/// Values that may come from a config file or from flags. `None` leaves the
/// current value in place.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub spins: Option<Vec<usize>>,
    pub temp_kelvin: Option<Vec<f64>>,
    pub b: Option<Vec<f64>>,
    pub mode: Option<InitialStateMode>,
    pub tau_start: Option<f64>,
    pub tau_stop: Option<f64>,
    pub tau_step: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub deterministic: Option<bool>,
    pub coupling_hz: Option<f64>,
    pub larmor_hz: Option<f64>,
    pub draws: Option<usize>,
    pub seed: Option<u64>,
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Config(format!("bad value `{s}` for `{key}`")))
        })
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

impl ConfigOverrides {
    /// Parses the flat key-value format. Keys use `snake_case` or the
    /// `kebab-case` spelling of the matching flag.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut o = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "n" | "spins" => o.spins = Some(parse_list(&key, value)?),
                "temp_kelvin" | "t_kelvin" => o.temp_kelvin = Some(parse_list(&key, value)?),
                "b" => o.b = Some(parse_list(&key, value)?),
                "mode" => o.mode = Some(value.parse()?),
                "tau_start" => o.tau_start = Some(parse_one(&key, value)?),
                "tau_stop" => o.tau_stop = Some(parse_one(&key, value)?),
                "tau_step" => o.tau_step = Some(parse_one(&key, value)?),
                "out" | "out_dir" => o.out_dir = Some(PathBuf::from(value)),
                "jobs" => o.jobs = Some(parse_one(&key, value)?),
                "deterministic" => o.deterministic = Some(parse_one(&key, value)?),
                "coupling_hz" => o.coupling_hz = Some(parse_one(&key, value)?),
                "larmor_hz" => o.larmor_hz = Some(parse_one(&key, value)?),
                "draws" => o.draws = Some(parse_one(&key, value)?),
                "seed" => o.seed = Some(parse_one(&key, value)?),
                other => return Err(Error::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        Ok(o)
    }

    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = &self.spins {
            cfg.spins = v.clone();
        }
        // an explicit temperature list of either kind replaces the other
        if self.temp_kelvin.is_some() || self.b.is_some() {
            let mut temps: Vec<Temperature> = Vec::new();
            if let Some(ts) = &self.temp_kelvin {
                temps.extend(ts.iter().map(|&t| Temperature::Kelvin(t)));
            }
            if let Some(bs) = &self.b {
                temps.extend(bs.iter().map(|&b| Temperature::B(b)));
            }
            cfg.temperatures = temps;
        }
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = &self.$field { cfg.$target = v.clone(); })*
            };
        }
        set!(mode => mode, tau_start => tau_start, tau_stop => tau_stop, tau_step => tau_step,
             out_dir => out_dir, deterministic => deterministic, coupling_hz => coupling_hz,
             larmor_hz => larmor_hz, draws => draws, seed => seed);
        if let Some(j) = self.jobs {
            cfg.jobs = Some(j);
        }
    }
}

impl RunConfig {
    /// Defaults, then the config file (if any), then flags.
    pub fn resolve(file_text: Option<&str>, flags: &ConfigOverrides) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(text) = file_text {
            ConfigOverrides::parse_file(text)?.apply(&mut cfg);
        }
        flags.apply(&mut cfg);
        Ok(cfg)
    }

    pub fn constants(&self) -> PhysicalConstants {
        PhysicalConstants {
            larmor: 2.0 * std::f64::consts::PI * self.larmor_hz,
            ..PhysicalConstants::with_coupling_hz(self.coupling_hz)
        }
    }

    pub fn times(&self) -> Vec<f64> {
        time_grid(self.tau_start, self.tau_stop, self.tau_step)
    }

    pub fn temperature_params(&self) -> Result<Vec<(Temperature, TemperatureParams)>> {
        let constants = self.constants();
        self.temperatures
            .iter()
            .map(|t| Ok((*t, t.params(&constants, self.mode)?)))
            .collect()
    }

    /// Checks shared by every subcommand; `require_odd` applies to the
    /// block-simulation commands.
    pub fn validate(&self, require_odd: bool) -> Result<()> {
        if !(self.tau_step > 0.0) {
            return Err(Error::Config(format!(
                "tau_step must be positive, got {}",
                self.tau_step
            )));
        }
        if !(self.tau_stop > self.tau_start) {
            return Err(Error::Config(format!(
                "empty time grid: tau_stop ({}) must exceed tau_start ({})",
                self.tau_stop, self.tau_start
            )));
        }
        if self.tau_start < 0.0 {
            return Err(Error::Config("tau_start must be non-negative".into()));
        }
        if self.spins.is_empty() {
            return Err(Error::Config("no spin counts given".into()));
        }
        if self.spins.contains(&0) {
            return Err(Error::ZeroSpins);
        }
        if require_odd {
            if let Some(n) = self.spins.iter().find(|&&n| n % 2 == 0) {
                return Err(Error::Config(format!("N must be odd for this command, got {n}")));
            }
        }
        if !self.constants().is_valid() {
            return Err(Error::Config("physical constants must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        self.temperature_params()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let text = "# comment\nn = 51, 75\ntemp_kelvin = 3.2e-4  # trailing\nmode = linearized\ntau-step = 0.02\n";
        let flags = ConfigOverrides {
            spins: Some(vec![101]),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(text), &flags).unwrap();
        assert_eq!(cfg.spins, vec![101]);
        assert_eq!(cfg.temperatures, vec![Temperature::Kelvin(3.2e-4)]);
        assert_eq!(cfg.mode, InitialStateMode::Linearized);
        assert_eq!(cfg.tau_step, 0.02);
        assert_eq!(cfg.tau_stop, 3.0);
    }

    #[test]
    fn b_flag_replaces_file_temperatures() {
        let flags = ConfigOverrides {
            b: Some(vec![1.0]),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some("temp_kelvin = 1e-4"), &flags).unwrap();
        assert_eq!(cfg.temperatures, vec![Temperature::B(1.0)]);
    }

    #[test]
    fn bad_files_rejected() {
        assert!(ConfigOverrides::parse_file("n 5").is_err());
        assert!(ConfigOverrides::parse_file("unknown = 1").is_err());
        assert!(ConfigOverrides::parse_file("n = five").is_err());
        assert!(ConfigOverrides::parse_file("mode = quadratic").is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig {
            spins: vec![3],
            temperatures: vec![Temperature::B(1.0)],
            ..Default::default()
        };
        assert!(cfg.validate(true).is_ok());
        assert_eq!(cfg.times().len(), 301);
        cfg.tau_stop = 0.0;
        assert!(cfg.validate(true).is_err());
        cfg.tau_stop = 3.0;
        cfg.tau_step = 0.0;
        assert!(cfg.validate(true).is_err());
        cfg.tau_step = 0.01;
        cfg.spins = vec![4];
        assert!(cfg.validate(true).is_err());
        assert!(cfg.validate(false).is_ok());
        cfg.temperatures = vec![Temperature::Kelvin(-1.0)];
        assert!(cfg.validate(false).is_err());
    }
}
