use clap::{Args, Parser, Subcommand};
use mqnmr::runner::{self, exit, ConfigOverrides, RunConfig};
use mqnmr::{Error, InitialStateMode, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mqnmr",
    version,
    about = "MQ NMR coherence dynamics and entanglement certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coherence intensities and F_Q lower bound over a time grid, one CSV per (N, T)
    Simulate(Common),
    /// Time-averaged maximal entangled cluster over an (N, T) grid
    Sweep(Common),
    /// Block dynamics at N = 3 against the closed-form intensities
    Oracle3(Common),
    /// Block, dense and phase-readout methods against each other (N <= 10)
    OracleCompare(Common),
    /// Two-pulse preparation: Zeeman trace, extracted alpha and beta (N <= 10)
    BjVerify(Common),
    /// Entanglement bound B(N, k) for every k
    BoundTable(Common),
    /// Recompute a simulate CSV from its JSON sidecar and print it
    Rerun { sidecar: PathBuf },
}

#[derive(Args)]
struct Common {
    /// Config file of `key = value` lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Spin counts, comma separated
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    temp_kelvin: Option<Vec<f64>>,
    /// Dimensionless inverse temperature b = ħD/(k_B T)
    #[arg(long, value_delimiter = ',')]
    b: Option<Vec<f64>>,
    /// exact | linearized
    #[arg(long)]
    mode: Option<InitialStateMode>,
    #[arg(long)]
    tau_start: Option<f64>,
    #[arg(long)]
    tau_stop: Option<f64>,
    #[arg(long)]
    tau_step: Option<f64>,
    #[arg(long, env = runner::OUT_DIR_ENV)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Drop timestamps so repeated runs are byte-identical
    #[arg(long)]
    deterministic: bool,
    /// Dipolar coupling D/2π in Hz
    #[arg(long)]
    coupling_hz: Option<f64>,
    /// Larmor frequency ω₀/2π in Hz
    #[arg(long)]
    larmor_hz: Option<f64>,
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig> {
        let text = self.config.as_ref().map(std::fs::read_to_string).transpose()?;
        let flags = ConfigOverrides {
            spins: self.n.clone(),
            temp_kelvin: self.temp_kelvin.clone(),
            b: self.b.clone(),
            mode: self.mode,
            tau_start: self.tau_start,
            tau_stop: self.tau_stop,
            tau_step: self.tau_step,
            out_dir: self.out.clone(),
            jobs: self.jobs,
            deterministic: self.deterministic.then_some(true),
            coupling_hz: self.coupling_hz,
            larmor_hz: self.larmor_hz,
            draws: self.draws,
            seed: self.seed,
        };
        RunConfig::resolve(text.as_deref(), &flags)
    }
}

fn report(r: runner::CheckReport) -> Result<()> {
    print!("{}", r.summary());
    if r.passed() {
        Ok(())
    } else {
        Err(Error::Consistency(format!("{} checks failed", r.command)))
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate(c) => {
            for path in runner::cmd_simulate(&c.resolve()?)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Sweep(c) => {
            let (path, _) = runner::cmd_sweep(&c.resolve()?)?;
            println!("{}", path.display());
            Ok(())
        }
        Command::Oracle3(c) => report(runner::cmd_oracle3(&c.resolve()?)?),
        Command::OracleCompare(c) => {
            let mut cfg = c.resolve()?;
            if c.n.is_none() && c.config.is_none() {
                cfg.spins = vec![3, 5, 7];
            }
            report(runner::cmd_oracle_compare(&cfg)?)
        }
        Command::BjVerify(c) => {
            let mut cfg = c.resolve()?;
            if c.n.is_none() && c.config.is_none() {
                cfg.spins = (2..=8).collect();
            }
            report(runner::cmd_bj_verify(&cfg)?)
        }
        Command::BoundTable(c) => {
            let cfg = c.resolve()?;
            for &n in &cfg.spins {
                let csv = runner::bound_table_csv(n)?;
                if c.out.is_some() || c.config.is_some() {
                    let path = cfg.out_dir.join(format!("bound_table_N{n}.csv"));
                    std::fs::create_dir_all(&cfg.out_dir)?;
                    std::fs::write(&path, &csv)?;
                }
                if cfg.spins.len() > 1 {
                    println!("# N = {n}");
                }
                print!("{csv}");
            }
            Ok(())
        }
        Command::Rerun { sidecar } => {
            print!("{}", runner::rerun_from_sidecar(&sidecar)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::USAGE as u8
            } else {
                exit::SUCCESS as u8
            });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(runner::exit_code(&e) as u8)
        }
    }
}
