//! Experiment drivers behind the command-line tool. Each `run_*` function
//! returns the CSV text it would write; file handling stays with the caller.
//!
//! Every CSV starts with a `#` comment carrying the tool version, a hash of
//! the scenario and the seed, followed by a header row. Numbers are printed
//! with 9 significant digits.

use sha2::{Digest, Sha256};

use crate::channel::{build_channel_set, ChannelSet};
use crate::error::{Error, Result};
use crate::optimize::{
    dft_sweep, iterative_optimize, AllocationSolution, AlphaProfile, OptimizationTrace, ReceivedPower,
};
use crate::ris::{binary_dft_codebook, Partition, PhaseConfig};
use crate::scenario_file;
use crate::scene::{db_to_linear, watts_to_dbm, ScenarioConfig};
use crate::secrecy::SecrecyThresholds;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Bob's minimum SINR (dB) used for the reference power sweeps.
pub const REFERENCE_GAMMA_BOB_DB: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Iterative,
    Dft,
    /// All phases at 0: the surface acts as a flat reflector.
    Zero,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Iterative => "iterative",
            Algorithm::Dft => "dft",
            Algorithm::Zero => "zero",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iterative" => Ok(Algorithm::Iterative),
            "dft" => Ok(Algorithm::Dft),
            "zero" => Ok(Algorithm::Zero),
            other => Err(Error::invalid(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Everything one experiment needs besides the command itself.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub scenario: ScenarioConfig,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub alpha_grid: usize,
    pub pt_sweep_dbm: Vec<f64>,
    pub eta: Option<f64>,
    pub gamma_bob_db: Option<f64>,
    /// Add mirror-baseline rows to alpha sweeps.
    pub include_zero: bool,
    /// Use these phases instead of running the algorithm.
    pub phases: Option<PhaseConfig>,
}

impl ExperimentSpec {
    pub fn new(scenario: ScenarioConfig) -> Self {
        ExperimentSpec {
            scenario,
            algorithm: Algorithm::Iterative,
            seed: 0,
            alpha_grid: 101,
            pt_sweep_dbm: default_pt_sweep(),
            eta: None,
            gamma_bob_db: None,
            include_zero: false,
            phases: None,
        }
    }

    /// Secrecy thresholds from `gamma_bob_db` and `eta`. A Bob threshold of
    /// −∞ dB together with an infinite `eta` means no constraint at all.
    pub fn thresholds(&self) -> Result<SecrecyThresholds> {
        let gb_db = self.gamma_bob_db.ok_or_else(|| Error::invalid("gamma_bob_db is required"))?;
        let eta = self.eta.ok_or_else(|| Error::invalid("eta is required"))?;
        let gb = db_to_linear(gb_db);
        if gb == 0.0 {
            let eve = if eta.is_infinite() { f64::INFINITY } else { 0.0 };
            return SecrecyThresholds::new(0.0, eve);
        }
        SecrecyThresholds::from_eta(gb, eta)
    }

    fn comment(&self) -> String {
        format!("# rispls {VERSION} scenario={} seed={}", scenario_hash(&self.scenario), self.seed)
    }
}

/// −30 dBm to +10 dBm in 2 dB steps.
pub fn default_pt_sweep() -> Vec<f64> {
    (0..=20).map(|i| -30.0 + 2.0 * i as f64).collect()
}

/// Parses `start:step:stop` (dBm, inclusive).
pub fn parse_pt_sweep(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::invalid(format!("power sweep must be start:step:stop, got {s:?}")))?;
    let [start, step, stop] = parts[..] else {
        return Err(Error::invalid(format!("power sweep must be start:step:stop, got {s:?}")));
    };
    if !(start.is_finite() && step.is_finite() && stop.is_finite()) || step <= 0.0 || stop < start {
        return Err(Error::invalid(format!("power sweep {s:?} needs finite start <= stop and step > 0")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

/// First 16 hex digits of the SHA-256 of the canonical scenario text.
pub fn scenario_hash(sc: &ScenarioConfig) -> String {
    let digest = Sha256::digest(scenario_file::to_string(sc).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Formats with 9 significant digits, trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..9).contains(&exp) {
        trim(&format!("{x:.*}", (8 - exp) as usize))
    } else {
        format!("{}e{exp}", trim(mant))
    }
}

/// Final configuration and per-partition traces of one phase search.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRun {
    pub config: PhaseConfig,
    pub bob_trace: OptimizationTrace,
    pub eve_trace: OptimizationTrace,
}

/// Tunes `r_b` for communication-signal power at Bob, then `r_e` for
/// artificial-noise power at Eve. The iterative search tunes `r_e` on top
/// of the tuned `r_b`; the codebook sweep tunes each half with the other
/// at 0 and concatenates the winners.
pub fn optimize_phases(sc: &ScenarioConfig, ch: &ChannelSet, algorithm: Algorithm, seed: u64) -> Result<PhaseRun> {
    let zero = PhaseConfig::zero(ch.split.clone());
    let pt = sc.pt_watts();
    let bob_oracle = ReceivedPower::for_partition(ch, Partition::Bob, pt);
    let eve_oracle = ReceivedPower::for_partition(ch, Partition::Eve, pt);
    match algorithm {
        Algorithm::Iterative => {
            let (cfg, bob_trace) = iterative_optimize(&bob_oracle, &zero, Partition::Bob, seed)?;
            let (config, eve_trace) = iterative_optimize(&eve_oracle, &cfg, Partition::Eve, seed)?;
            Ok(PhaseRun { config, bob_trace, eve_trace })
        }
        Algorithm::Dft => {
            let half = ch.split.half();
            let cb = binary_dft_codebook(half)?;
            let (b, bob_trace) = dft_sweep(&bob_oracle, &zero, Partition::Bob, &cb, seed, half)?;
            let (e, eve_trace) = dft_sweep(&eve_oracle, &zero, Partition::Eve, &cb, seed, half)?;
            let config = b.with_partition_bits(Partition::Eve, &e.partition_bits(Partition::Eve))?;
            Ok(PhaseRun { config, bob_trace, eve_trace })
        }
        Algorithm::Zero => {
            let single = |oracle: &ReceivedPower| -> Result<OptimizationTrace> {
                use crate::optimize::{PowerOracle, TraceEntry};
                let p = oracle.measure(&zero)?;
                Ok(OptimizationTrace { entries: vec![TraceEntry { trial: 1, power: p, best: p, probe: 0 }] })
            };
            Ok(PhaseRun { bob_trace: single(&bob_oracle)?, eve_trace: single(&eve_oracle)?, config: zero.clone() })
        }
    }
}

fn phases_for(spec: &ExperimentSpec, ch: &ChannelSet, algorithm: Algorithm) -> Result<PhaseConfig> {
    match (&spec.phases, algorithm == spec.algorithm) {
        (Some(p), true) => {
            if p.split() != &ch.split {
                return Err(Error::invalid("supplied phase configuration does not fit the scenario"));
            }
            Ok(p.clone())
        }
        _ => Ok(optimize_phases(&spec.scenario, ch, algorithm, spec.seed)?.config),
    }
}

struct Csv {
    out: csv::Writer<Vec<u8>>,
}

impl Csv {
    fn new(comment: &str, header: &[&str]) -> Result<Self> {
        let mut buf = Vec::new();
        buf.extend_from_slice(comment.as_bytes());
        buf.push(b'\n');
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(buf);
        out.write_record(header).map_err(csv_err)?;
        Ok(Csv { out })
    }

    fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.out.write_record(fields).map_err(csv_err)
    }

    fn finish(self) -> Result<String> {
        let bytes = self.out.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::invalid(format!("csv: {e}"))
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Output of the `optimize-phases` command.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOutputs {
    pub trace_csv: String,
    /// One line of comma-separated bits, newline terminated.
    pub config_line: String,
    pub run: PhaseRun,
}

pub fn run_optimize_phases(spec: &ExperimentSpec) -> Result<PhaseOutputs> {
    let ch = build_channel_set(&spec.scenario)?;
    let run = optimize_phases(&spec.scenario, &ch, spec.algorithm, spec.seed)?;
    let mut csv = Csv::new(&spec.comment(), &["trial", "power_dbm", "best_power_dbm", "partition", "algorithm"])?;
    for (part, trace) in [(Partition::Bob, &run.bob_trace), (Partition::Eve, &run.eve_trace)] {
        for e in &trace.entries {
            csv.row([
                e.trial.to_string(),
                fmt_num(watts_to_dbm(e.power)),
                fmt_num(watts_to_dbm(e.best)),
                part.as_str().to_string(),
                spec.algorithm.as_str().to_string(),
            ])?;
        }
    }
    Ok(PhaseOutputs { trace_csv: csv.finish()?, config_line: format!("{}\n", run.config.to_line()), run })
}

pub fn alpha_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid(format!("alpha grid needs at least 2 points, got {n}")));
    }
    Ok((0..n).map(|i| i as f64 / (n - 1) as f64).collect())
}

/// Capacities over a uniform `alpha1` grid for the selected algorithm and,
/// if requested, the all-zero baseline.
pub fn run_sweep_alpha(spec: &ExperimentSpec) -> Result<String> {
    let ch = build_channel_set(&spec.scenario)?;
    let grid = alpha_grid(spec.alpha_grid)?;
    let mut algorithms = vec![spec.algorithm];
    if spec.include_zero && spec.algorithm != Algorithm::Zero {
        algorithms.push(Algorithm::Zero);
    }
    let mut csv = Csv::new(
        &spec.comment(),
        &["algorithm", "alpha1", "c_bob", "c_eve", "c_secrecy", "sinr_bob_db", "sinr_eve_db"],
    )?;
    for alg in algorithms {
        let cfg = phases_for(spec, &ch, alg)?;
        let profile = AlphaProfile::new(&spec.scenario, &ch, &cfg)?;
        let reports = par_map(&grid, |&a| profile.report(a));
        for (&a, r) in grid.iter().zip(reports) {
            let r = r?;
            csv.row([
                alg.as_str().to_string(),
                fmt_num(a),
                fmt_num(r.c_bob),
                fmt_num(r.c_eve),
                fmt_num(r.c_secrecy),
                fmt_num(r.sinr_bob_db()),
                fmt_num(r.sinr_eve_db()),
            ])?;
        }
    }
    csv.finish()
}

/// One transmit-power point of a power sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPoint {
    pub pt_dbm: f64,
    pub solution: AllocationSolution,
}

/// Solves the constrained allocation at every transmit power of the
/// sweep. Phases are tuned once; the search is insensitive to a common
/// power scale.
pub fn sweep_power(spec: &ExperimentSpec) -> Result<Vec<PowerPoint>> {
    let th = spec.thresholds()?;
    let ch = build_channel_set(&spec.scenario)?;
    let cfg = phases_for(spec, &ch, spec.algorithm)?;
    par_map(&spec.pt_sweep_dbm, |&pt_dbm| -> Result<PowerPoint> {
        let sc = spec.scenario.with_pt_dbm(pt_dbm);
        let solution = AlphaProfile::new(&sc, &ch, &cfg)?.solve(&th, spec.alpha_grid)?;
        Ok(PowerPoint { pt_dbm, solution })
    })
    .into_iter()
    .collect()
}

fn solution_fields(s: &AllocationSolution) -> [String; 6] {
    [
        fmt_num(s.alpha1),
        s.feasible.to_string(),
        fmt_num(s.report.c_bob),
        fmt_num(s.report.c_eve),
        fmt_num(s.report.c_secrecy),
        s.binding.as_str().to_string(),
    ]
}

/// CSV text plus whether every point was infeasible.
pub fn run_sweep_power(spec: &ExperimentSpec) -> Result<(String, bool)> {
    let points = sweep_power(spec)?;
    let mut csv = Csv::new(
        &spec.comment(),
        &["pt_dbm", "alpha1", "feasible", "c_bob", "c_eve", "c_secrecy", "binding_constraint"],
    )?;
    for p in &points {
        let mut row = vec![fmt_num(p.pt_dbm)];
        row.extend(solution_fields(&p.solution));
        csv.row(row)?;
    }
    let all_infeasible = points.iter().all(|p| !p.solution.feasible);
    Ok((csv.finish()?, all_infeasible))
}

pub fn solve_alpha(spec: &ExperimentSpec) -> Result<AllocationSolution> {
    let th = spec.thresholds()?;
    let ch = build_channel_set(&spec.scenario)?;
    let cfg = phases_for(spec, &ch, spec.algorithm)?;
    AlphaProfile::new(&spec.scenario, &ch, &cfg)?.solve(&th, spec.alpha_grid)
}

pub fn run_solve_alpha(spec: &ExperimentSpec) -> Result<(String, AllocationSolution)> {
    let s = solve_alpha(spec)?;
    let mut csv = Csv::new(
        &spec.comment(),
        &["alpha1", "feasible", "c_bob", "c_eve", "c_secrecy", "binding_constraint"],
    )?;
    csv.row(solution_fields(&s))?;
    Ok((csv.finish()?, s))
}

pub fn run_dump_channels(spec: &ExperimentSpec) -> Result<String> {
    let ch = build_channel_set(&spec.scenario)?;
    let mut csv = Csv::new(
        &spec.comment(),
        &["n", "h_s_amp", "h_s_phase", "h_a_amp", "h_a_phase", "h_b_amp", "h_b_phase", "h_e_amp", "h_e_phase"],
    )?;
    for n in 0..ch.len() {
        let mut row = vec![(n + 1).to_string()];
        for h in [&ch.h_s, &ch.h_a, &ch.h_b, &ch.h_e] {
            row.push(fmt_num(h[n].amplitude));
            row.push(fmt_num(h[n].phase));
        }
        csv.row(row)?;
    }
    csv.finish()
}
