//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rispls::harness::{self, Algorithm, ExperimentSpec};
use rispls::optimize::AlphaProfile;
use rispls::secrecy::{capacity_from_sinr, link_budget_sinr, BETA_ROUTES};
use rispls::{
    binary_dft_codebook, bob_capacity, build_channel_set, dft_sweep, eve_capacity, exhaustive_search,
    iterative_optimize, secrecy_capacity, sinr_values, ChannelSet, LinkPowers, Partition, PhaseConfig, PowerOracle,
    PowerSplit, ReceivedPower, ScenarioConfig, SecrecyThresholds, Source, User, Vec3,
};

/// Seed and Bob threshold used for the transmit-power sweeps.
const POWER_SWEEP_SEED: u64 = 9;
const POWER_SWEEP_GAMMA_BOB_DB: f64 = harness::REFERENCE_GAMMA_BOB_DB;

type Check = Result<String, String>;

fn reference() -> (ScenarioConfig, ChannelSet) {
    let sc = ScenarioConfig::reference();
    let ch = build_channel_set(&sc).unwrap();
    (sc, ch)
}

fn iterative_phases(seed: u64) -> PhaseConfig {
    let (sc, ch) = reference();
    harness::optimize_phases(&sc, &ch, Algorithm::Iterative, seed).unwrap().config
}

fn monotone_ascent() -> Check {
    let (sc, ch) = reference();
    let start = Instant::now();
    for seed in 0..10 {
        let run = harness::optimize_phases(&sc, &ch, Algorithm::Iterative, seed).map_err(|e| e.to_string())?;
        for (name, t) in [("r_b", &run.bob_trace), ("r_e", &run.eve_trace)] {
            if t.len() != 128 {
                return Err(format!("seed {seed} {name}: {} trace points", t.len()));
            }
            if let Some(w) = t.entries.windows(2).find(|w| w[1].best < w[0].best) {
                return Err(format!("seed {seed} {name}: best fell at trial {}", w[1].trial));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 5.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!("10 seeds x 2 partitions x 128 steps non-decreasing in {secs:.2} s"))
}

fn iterative_dominance() -> Check {
    let (sc, ch) = reference();
    let mut wins = 0;
    for seed in 0..10 {
        let it = harness::optimize_phases(&sc, &ch, Algorithm::Iterative, seed).unwrap();
        let dft = harness::optimize_phases(&sc, &ch, Algorithm::Dft, seed).unwrap();
        if it.bob_trace.best().unwrap() >= dft.bob_trace.best().unwrap() {
            wins += 1;
        }
    }
    if wins >= 9 {
        Ok(format!("iterative P_CS >= DFT best for {wins}/10 seeds"))
    } else {
        Err(format!("iterative won only {wins}/10 seeds"))
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> Vec3 {
    Vec3::new(rng.gen_range(0.3..2.0), rng.gen_range(-1.5..1.5), rng.gen_range(-0.3..0.8))
}

fn random_small_scenario(rng: &mut ChaCha8Rng) -> ScenarioConfig {
    let mut sc = ScenarioConfig::reference();
    sc.ris.rows = 4;
    sc.ris.cols = 4;
    sc.cs_tx = random_point(rng);
    sc.an_tx = random_point(rng);
    sc.bob = random_point(rng);
    sc.eve = random_point(rng);
    sc
}

fn brute_force_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cb = binary_dft_codebook(8).unwrap();
    let start = Instant::now();
    let mut in_codebook = 0;
    for trial in 0..100 {
        let sc = random_small_scenario(&mut rng);
        let ch = build_channel_set(&sc).map_err(|e| e.to_string())?;
        let which = if trial % 2 == 0 { Partition::Bob } else { Partition::Eve };
        let oracle = ReceivedPower::for_partition(&ch, which, sc.pt_watts());
        let zero = PhaseConfig::zero(ch.split.clone());
        let p_zero = oracle.measure(&zero).unwrap();
        let (ex, p_ex) = exhaustive_search(&oracle, &zero, which).unwrap();
        let (it, _) = iterative_optimize(&oracle, &zero, which, trial).unwrap();
        let p_it = oracle.measure(&it).unwrap();
        if !(p_ex >= p_it && p_it >= p_zero) {
            return Err(format!("trial {trial}: exhaustive {p_ex:e}, iterative {p_it:e}, zero {p_zero:e}"));
        }
        let (_, trace) = dft_sweep(&oracle, &zero, which, &cb, trial, 8).unwrap();
        let p_dft = trace.best().unwrap();
        if p_dft > p_ex {
            return Err(format!("trial {trial}: sweep {p_dft:e} beats exhaustive {p_ex:e}"));
        }
        if cb.codewords().iter().any(|w| *w == ex.partition_bits(which)) {
            in_codebook += 1;
            if p_dft != p_ex {
                return Err(format!("trial {trial}: optimum is a codeword but sweep found {p_dft:e} < {p_ex:e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 10.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!("100 trials, optimum in codebook {in_codebook} times, {secs:.2} s"))
}

fn unconstrained_argmax() -> Check {
    let (sc, ch) = reference();
    let cfg = iterative_phases(0);
    let sol = AlphaProfile::new(&sc, &ch, &cfg).unwrap().solve(&SecrecyThresholds::unconstrained(), 101).unwrap();
    if (0.95..=0.999).contains(&sol.alpha1) {
        Ok(format!("alpha1 = {:.4}, C_s = {:.3}", sol.alpha1, sol.report.c_secrecy))
    } else {
        Err(format!("alpha1 = {}", sol.alpha1))
    }
}

fn eve_suppression() -> Check {
    let (sc, ch) = reference();
    let profile = AlphaProfile::new(&sc, &ch, &iterative_phases(0)).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..=100 {
        let a = i as f64 / 100.0;
        if a > 0.6 + 1e-12 {
            break;
        }
        worst = worst.max(profile.report(a).unwrap().c_eve);
    }
    if worst <= 0.1 {
        Ok(format!("max c_eve over alpha1 <= 0.6 is {worst:.4}"))
    } else {
        Err(format!("c_eve reaches {worst:.4}"))
    }
}

fn power_convergence() -> Check {
    let mut msgs = Vec::new();
    let mut ok = true;
    for (eta, alpha_target, cb_target) in [(0.01, 0.55, 7.0), (0.1, 0.92, 11.0)] {
        let mut spec = ExperimentSpec::new(ScenarioConfig::reference());
        spec.seed = POWER_SWEEP_SEED;
        spec.eta = Some(eta);
        spec.gamma_bob_db = Some(POWER_SWEEP_GAMMA_BOB_DB);
        let points = harness::sweep_power(&spec).map_err(|e| e.to_string())?;
        let top = points.last().unwrap();
        let s = &top.solution;
        let pass = s.feasible && (s.alpha1 - alpha_target).abs() <= 0.10 && (s.report.c_bob - cb_target).abs() <= 1.5;
        ok &= pass;
        msgs.push(format!(
            "eta {eta}: alpha1 {:.3} (target {alpha_target}), C_b {:.2} (target {cb_target}) at {} dBm",
            s.alpha1, s.report.c_bob, top.pt_dbm
        ));
    }
    let msg = format!("seed {POWER_SWEEP_SEED}, gamma_b {POWER_SWEEP_GAMMA_BOB_DB} dB; {}", msgs.join("; "));
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// β² straight from the element channels, without the path-loss/gain split.
fn raw_beta_sq(ch: &ChannelSet, cfg: &PhaseConfig, s: Source, p: Partition, u: User) -> f64 {
    let phases = cfg.phases();
    let sum: Complex64 = cfg
        .split()
        .indices(p)
        .iter()
        .map(|&n| ch.incoming(s)[n].to_complex() * ch.outgoing(u)[n].to_complex() * Complex64::from_polar(1.0, -phases[n]))
        .sum();
    sum.norm_sqr()
}

fn capacity_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_cap: f64 = 0.0;
    for _ in 0..1000 {
        let mut beta = [0.0; 8];
        for b in beta.iter_mut() {
            *b = 10f64.powf(rng.gen_range(-8.0..-2.0));
        }
        let lp = LinkPowers {
            beta,
            noise_bob: 10f64.powf(rng.gen_range(-14.0..-9.0)),
            noise_eve: 10f64.powf(rng.gen_range(-14.0..-9.0)),
        };
        let (sb, se) = sinr_values(&lp).unwrap();
        let sq = |k: usize| beta[k] * beta[k];
        let sb_ref = (sq(0) + sq(1)) / (sq(2) + sq(3) + lp.noise_bob);
        let se_ref = (sq(6) + sq(7)) / (sq(4) + sq(5) + lp.noise_eve);
        let cb = bob_capacity(&lp).unwrap();
        let ce = eve_capacity(&lp).unwrap();
        for (c, s) in [(cb, sb_ref), (ce, se_ref)] {
            let want = (1.0 + s).log2();
            worst_cap = worst_cap.max(((c - want) / want).abs());
        }
        worst_cap = worst_cap.max(((sb - sb_ref) / sb_ref).abs()).max(((se - se_ref) / se_ref).abs());
        let cs = secrecy_capacity(cb, ce);
        if cs != (capacity_from_sinr(sb) - capacity_from_sinr(se)).max(0.0) {
            return Err("secrecy capacity differs from max(C_b - C_e, 0)".into());
        }
    }
    if worst_cap > 1e-12 {
        return Err(format!("capacity/SINR relative error {worst_cap:e}"));
    }

    let mut worst_lg: f64 = 0.0;
    let (sc, ch) = reference();
    for _ in 0..200 {
        let bits: Vec<bool> = (0..ch.len()).map(|_| rng.gen()).collect();
        let cfg = PhaseConfig::from_bits(bits, ch.split.clone()).unwrap();
        let split = PowerSplit::new(rng.gen_range(0.01..0.99)).unwrap();
        let pt = sc.pt_watts();
        let mut b2 = [0.0; 8];
        for (v, &(s, p, u)) in b2.iter_mut().zip(BETA_ROUTES.iter()) {
            let a = if s == Source::Cs { split.alpha1 } else { split.alpha2 };
            *v = a * pt * raw_beta_sq(&ch, &cfg, s, p, u);
        }
        let sb_raw = (b2[0] + b2[1]) / (b2[2] + b2[3] + sc.noise_bob_watts());
        let se_raw = (b2[6] + b2[7]) / (b2[4] + b2[5] + sc.noise_eve_watts());
        let (sb, se) = link_budget_sinr(&sc, &ch, &cfg, split).unwrap();
        worst_lg = worst_lg.max(((sb - sb_raw) / sb_raw).abs()).max(((se - se_raw) / se_raw).abs());
    }
    if worst_lg > 1e-9 {
        return Err(format!("L*G^2 vs raw beta^2 relative error {worst_lg:e}"));
    }
    Ok(format!("1000 link budgets within {worst_cap:.1e}; path-loss/gain form within {worst_lg:.1e} of raw sums"))
}

fn determinism() -> Check {
    let mut spec = ExperimentSpec::new(ScenarioConfig::reference());
    spec.seed = 3;
    spec.eta = Some(0.1);
    spec.gamma_bob_db = Some(POWER_SWEEP_GAMMA_BOB_DB);
    spec.alpha_grid = 21;
    spec.include_zero = true;
    let mut checked = 0;
    for alg in [Algorithm::Iterative, Algorithm::Dft, Algorithm::Zero] {
        spec.algorithm = alg;
        let run = |s: &ExperimentSpec| -> Vec<String> {
            let p = harness::run_optimize_phases(s).unwrap();
            vec![
                p.trace_csv,
                p.config_line,
                harness::run_sweep_alpha(s).unwrap(),
                harness::run_sweep_power(s).unwrap().0,
                harness::run_solve_alpha(s).unwrap().0,
                harness::run_dump_channels(s).unwrap(),
            ]
        };
        let (a, b) = (run(&spec), run(&spec));
        for (x, y) in a.iter().zip(&b) {
            if x != y {
                return Err(format!("{} output differs between runs", alg.as_str()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} outputs byte-identical across repeated runs"))
}

fn capacity_ratio_ordering() -> Check {
    let (sc, ch) = reference();
    let ratio = |alg: Algorithm| -> f64 {
        let cfg = harness::optimize_phases(&sc, &ch, alg, 0).unwrap().config;
        AlphaProfile::new(&sc, &ch, &cfg).unwrap().capacity_ratio_alpha(0.01, 101).unwrap()
    };
    let (it, dft) = (ratio(Algorithm::Iterative), ratio(Algorithm::Dft));
    let msg = format!("ratio 0.01: iterative alpha1 {it:.3}, DFT alpha1 {dft:.3} (need both in (0, 0.8), iterative <= DFT + 0.15)");
    if it > 0.0 && it < 0.8 && dft > 0.0 && dft < 0.8 && it <= dft + 0.15 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Check); 9] = [
        ("1 monotone iterative ascent", monotone_ascent),
        ("2 iterative dominance over DFT sweep", iterative_dominance),
        ("3 brute-force oracle equivalence", brute_force_equivalence),
        ("4 unconstrained secrecy argmax", unconstrained_argmax),
        ("5 Eve suppression region", eve_suppression),
        ("6 transmit-power convergence", power_convergence),
        ("7 capacity/SINR consistency", capacity_consistency),
        ("8 determinism", determinism),
        ("9 capacity-ratio operating point", capacity_ratio_ordering),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(msg) => println!("PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
