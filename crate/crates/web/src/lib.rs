//! Browser bindings for the interactive demo in `www/`.
//!
//! Everything runs on the built-in reference scenario. Results come back as
//! flat `f64` arrays so the page can plot them without a serializer.

use wasm_bindgen::prelude::*;

use rispls::harness::{self, Algorithm, ExperimentSpec};
use rispls::optimize::AlphaProfile;
use rispls::{build_channel_set, PhaseConfig, ScenarioConfig};

fn algorithm(name: &str) -> Result<Algorithm, String> {
    name.parse().map_err(|e: rispls::Error| e.to_string())
}

fn phases(sc: &ScenarioConfig, alg: Algorithm, seed: u32) -> Result<(rispls::ChannelSet, harness::PhaseRun), String> {
    let ch = build_channel_set(sc).map_err(|e| e.to_string())?;
    let run = harness::optimize_phases(sc, &ch, alg, seed as u64).map_err(|e| e.to_string())?;
    Ok((ch, run))
}

fn to_dbm(w: f64) -> f64 {
    10.0 * (w * 1e3).log10()
}

/// Best-so-far received power (dBm) after each trial: the `r_b` trace
/// followed by the `r_e` trace.
#[wasm_bindgen]
pub fn phase_trace(algorithm_name: &str, seed: u32) -> Result<Vec<f64>, String> {
    let sc = ScenarioConfig::reference();
    let (_, run) = phases(&sc, algorithm(algorithm_name)?, seed)?;
    Ok(run.bob_trace.entries.iter().chain(&run.eve_trace.entries).map(|e| to_dbm(e.best)).collect())
}

/// Final surface configuration, one byte per element in row-major order.
#[wasm_bindgen]
pub fn phase_map(algorithm_name: &str, seed: u32) -> Result<Vec<u8>, String> {
    let sc = ScenarioConfig::reference();
    let (_, run) = phases(&sc, algorithm(algorithm_name)?, seed)?;
    Ok(run.config.bits().iter().map(|&b| b as u8).collect())
}

#[wasm_bindgen]
pub fn ris_columns() -> u32 {
    ScenarioConfig::reference().ris.cols as u32
}

/// `[alpha1, c_bob, c_eve, c_secrecy]` per grid point, flattened.
#[wasm_bindgen]
pub fn alpha_sweep(algorithm_name: &str, seed: u32, grid: u32) -> Result<Vec<f64>, String> {
    let sc = ScenarioConfig::reference();
    let (ch, run) = phases(&sc, algorithm(algorithm_name)?, seed)?;
    let profile = alpha_profile(&sc, &ch, &run.config)?;
    let mut out = Vec::new();
    for a in harness::alpha_grid(grid as usize).map_err(|e| e.to_string())? {
        let r = profile.report(a).map_err(|e| e.to_string())?;
        out.extend([a, r.c_bob, r.c_eve, r.c_secrecy]);
    }
    Ok(out)
}

fn alpha_profile(sc: &ScenarioConfig, ch: &rispls::ChannelSet, cfg: &PhaseConfig) -> Result<AlphaProfile, String> {
    AlphaProfile::new(sc, ch, cfg).map_err(|e| e.to_string())
}

/// `[pt_dbm, alpha1, feasible (0/1), c_bob, c_eve, c_secrecy]` per transmit
/// power from −30 to +10 dBm, flattened.
#[wasm_bindgen]
pub fn power_sweep(algorithm_name: &str, seed: u32, eta: f64, gamma_bob_db: f64) -> Result<Vec<f64>, String> {
    let mut spec = ExperimentSpec::new(ScenarioConfig::reference());
    spec.algorithm = algorithm(algorithm_name)?;
    spec.seed = seed as u64;
    spec.eta = Some(eta);
    spec.gamma_bob_db = Some(gamma_bob_db);
    let points = harness::sweep_power(&spec).map_err(|e| e.to_string())?;
    Ok(points
        .iter()
        .flat_map(|p| {
            let s = &p.solution;
            [p.pt_dbm, s.alpha1, s.feasible as u8 as f64, s.report.c_bob, s.report.c_eve, s.report.c_secrecy]
        })
        .collect())
}

#[wasm_bindgen]
pub fn reference_gamma_bob_db() -> f64 {
    harness::REFERENCE_GAMMA_BOB_DB
}
