use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{OptimizationTrace, PowerOracle, TraceEntry};
use crate::error::{Error, Result};
use crate::ris::{Codebook, Partition, PhaseConfig};

/// Largest partition [`exhaustive_search`] will enumerate.
pub const MAX_EXHAUSTIVE: usize = 20;

fn rng_for(seed: u64, which: Partition) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(match which {
        Partition::Bob => 1,
        Partition::Eve => 2,
    });
    rng
}

/// Single-pass binary coordinate ascent over partition `which`.
pub fn iterative_optimize<O: PowerOracle + ?Sized>(
    oracle: &O,
    cfg: &PhaseConfig,
    which: Partition,
    seed: u64,
) -> Result<(PhaseConfig, OptimizationTrace)> {
    iterative_optimize_passes(oracle, cfg, which, seed, 1)
}

/// Coordinate ascent: each pass visits the partition's elements in a fresh
/// seeded random order, measures the element flipped, and keeps the flip
/// only if it strictly raises the measured power. The incumbent's power is
/// cached, so a pass costs one measurement per element.
pub fn iterative_optimize_passes<O: PowerOracle + ?Sized>(
    oracle: &O,
    cfg: &PhaseConfig,
    which: Partition,
    seed: u64,
    passes: usize,
) -> Result<(PhaseConfig, OptimizationTrace)> {
    let mut rng = rng_for(seed, which);
    let mut current = cfg.clone();
    let mut best = oracle.measure(&current)?;
    let mut trace = OptimizationTrace::default();
    let mut order = cfg.split().indices(which).to_vec();
    for _ in 0..passes {
        order.shuffle(&mut rng);
        for &n in &order {
            let candidate = current.with_element(n, !current.bits()[n]);
            let power = oracle.measure(&candidate)?;
            if power > best {
                best = power;
                current = candidate;
            }
            trace.entries.push(TraceEntry { trial: trace.len() + 1, power, best, probe: n });
        }
    }
    Ok((current, trace))
}

/// Applies each codeword to partition `which` of `cfg` and keeps the one
/// with the highest measured power (first one on ties). If the codebook
/// holds fewer than `budget` codewords the sweep is extended with seeded
/// random binary vectors.
pub fn dft_sweep<O: PowerOracle + ?Sized>(
    oracle: &O,
    cfg: &PhaseConfig,
    which: Partition,
    cb: &Codebook,
    seed: u64,
    budget: usize,
) -> Result<(PhaseConfig, OptimizationTrace)> {
    if cb.is_empty() {
        return Err(Error::EmptyCodebook);
    }
    let width = cfg.split().indices(which).len();
    if cb.dimension() != width {
        return Err(Error::invalid(format!(
            "codewords have {} entries, partition {} has {width}",
            cb.dimension(),
            which.as_str()
        )));
    }
    let seed = seed ^ match which {
        Partition::Bob => 0x0b0b,
        Partition::Eve => 0x0e0e,
    };
    let mut trace = OptimizationTrace::default();
    let mut winner: Option<(f64, PhaseConfig)> = None;
    for (k, word) in cb.padded_sweep(budget, seed).iter().enumerate() {
        let candidate = cfg.with_partition_bits(which, word)?;
        let power = oracle.measure(&candidate)?;
        if winner.as_ref().is_none_or(|(b, _)| power > *b) {
            winner = Some((power, candidate));
        }
        let best = winner.as_ref().map_or(power, |(b, _)| *b);
        trace.entries.push(TraceEntry { trial: k + 1, power, best, probe: k });
    }
    let (_, cfg) = winner.expect("codebook is non-empty");
    Ok((cfg, trace))
}

/// Global maximizer over all `2^k` settings of partition `which`, other
/// elements held as in `cfg`. Ties go to the configuration enumerated
/// first (all-zero first).
pub fn exhaustive_search<O: PowerOracle + ?Sized>(
    oracle: &O,
    cfg: &PhaseConfig,
    which: Partition,
) -> Result<(PhaseConfig, f64)> {
    let width = cfg.split().indices(which).len();
    if width > MAX_EXHAUSTIVE {
        return Err(Error::PartitionTooLarge(width));
    }
    let mut best: Option<(PhaseConfig, f64)> = None;
    for mask in 0u32..(1u32 << width) {
        let bits: Vec<bool> = (0..width).map(|i| mask >> i & 1 == 1).collect();
        let candidate = cfg.with_partition_bits(which, &bits)?;
        let power = oracle.measure(&candidate)?;
        if best.as_ref().is_none_or(|(_, b)| power > *b) {
            best = Some((candidate, power));
        }
    }
    Ok(best.expect("at least one configuration"))
}
