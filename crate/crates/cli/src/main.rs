use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rispls::harness::{self, Algorithm, ExperimentSpec};
use rispls::{scenario_file, PartitionSplit, PhaseConfig, ScenarioConfig};

/// Secrecy experiments on a split reconfigurable intelligent surface.
#[derive(Parser, Debug)]
#[command(name = "rispls", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tune both surface halves; writes the trace CSV and the bits line.
    OptimizePhases {
        #[command(flatten)]
        common: Common,
        /// Where to write the final configuration (default: --out with a .cfg extension).
        #[arg(long)]
        config_out: Option<PathBuf>,
    },
    /// Capacities over a uniform alpha1 grid.
    SweepAlpha {
        #[command(flatten)]
        common: Common,
        /// Also emit the all-zero (mirror) baseline.
        #[arg(long)]
        include_zero: bool,
    },
    /// Constrained power split at every transmit power of a sweep.
    SweepPower {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        constraints: Constraints,
        /// Transmit powers in dBm as start:step:stop.
        #[arg(long, default_value = "-30:2:10", allow_hyphen_values = true)]
        pt_sweep: String,
    },
    /// Constrained power split at the scenario's transmit power.
    SolveAlpha {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        constraints: Constraints,
    },
    /// Per-element channel amplitudes and phases.
    DumpChannels {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file (default: the built-in reference scenario).
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, default_value = "iterative")]
    algorithm: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 101)]
    alpha_grid: usize,
    /// Use this configuration file instead of running the phase search.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Constraints {
    /// Ratio between Eve's maximum and Bob's minimum SINR ("inf" disables Eve's bound).
    #[arg(long)]
    eta: f64,
    /// Bob's minimum SINR in dB ("-inf" disables it).
    #[arg(long, allow_hyphen_values = true)]
    gamma_bob_db: f64,
}

enum Outcome {
    Done,
    Infeasible,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Infeasible) => {
            eprintln!("rispls: no feasible power split");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("rispls: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn spec_from(common: &Common) -> Result<ExperimentSpec> {
    let scenario = match &common.scenario {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            scenario_file::parse(&text).with_context(|| format!("scenario {}", p.display()))?
        }
        None => ScenarioConfig::reference(),
    };
    let mut spec = ExperimentSpec::new(scenario);
    spec.algorithm = common.algorithm.parse::<Algorithm>()?;
    spec.seed = common.seed;
    harness::alpha_grid(common.alpha_grid)?;
    spec.alpha_grid = common.alpha_grid;
    if let Some(p) = &common.config {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let split = PartitionSplit::from_geometry(&spec.scenario.ris);
        spec.phases = Some(PhaseConfig::from_line(text.trim(), split).with_context(|| format!("config {}", p.display()))?);
    }
    Ok(spec)
}

fn constrain(spec: &mut ExperimentSpec, c: &Constraints) -> Result<()> {
    if c.eta.is_nan() || c.eta < 0.0 {
        bail!("--eta must be non-negative");
    }
    if c.gamma_bob_db.is_nan() || c.gamma_bob_db == f64::INFINITY {
        bail!("--gamma-bob-db must be a finite number or -inf");
    }
    spec.eta = Some(c.eta);
    spec.gamma_bob_db = Some(c.gamma_bob_db);
    spec.thresholds()?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::OptimizePhases { common, config_out } => {
            let spec = spec_from(&common)?;
            let res = harness::run_optimize_phases(&spec)?;
            emit(common.out.as_deref(), &res.trace_csv)?;
            let cfg_path = config_out.or_else(|| common.out.as_ref().map(|p| p.with_extension("cfg")));
            match cfg_path {
                Some(p) => fs::write(&p, &res.config_line).with_context(|| format!("writing {}", p.display()))?,
                None => eprint!("{}", res.config_line),
            }
        }
        Command::SweepAlpha { common, include_zero } => {
            let mut spec = spec_from(&common)?;
            spec.include_zero = include_zero;
            emit(common.out.as_deref(), &harness::run_sweep_alpha(&spec)?)?;
        }
        Command::SweepPower { common, constraints, pt_sweep } => {
            let mut spec = spec_from(&common)?;
            constrain(&mut spec, &constraints)?;
            spec.pt_sweep_dbm = harness::parse_pt_sweep(&pt_sweep)?;
            let (text, all_infeasible) = harness::run_sweep_power(&spec)?;
            emit(common.out.as_deref(), &text)?;
            if all_infeasible {
                return Ok(Outcome::Infeasible);
            }
        }
        Command::SolveAlpha { common, constraints } => {
            let mut spec = spec_from(&common)?;
            constrain(&mut spec, &constraints)?;
            let (text, sol) = harness::run_solve_alpha(&spec)?;
            emit(common.out.as_deref(), &text)?;
            if !sol.feasible {
                return Ok(Outcome::Infeasible);
            }
        }
        Command::DumpChannels { common } => {
            let spec = spec_from(&common)?;
            emit(common.out.as_deref(), &harness::run_dump_channels(&spec)?)?;
        }
    }
    Ok(Outcome::Done)
}
