//! RIS phase search driven only by received-power measurements, and the
//! constrained communication/noise power split.

mod alpha;
mod phase;

pub use alpha::{capacity_ratio_alpha, optimize_alpha, AllocationSolution, AlphaProfile, Binding};
pub use phase::{dft_sweep, exhaustive_search, iterative_optimize, iterative_optimize_passes, MAX_EXHAUSTIVE};

use crate::channel::{ChannelSet, Source, User};
use crate::error::Result;
use crate::ris::{Partition, PhaseConfig};

/// Evaluates a phase configuration and returns a received power in watts.
///
/// The optimizers see nothing but these numbers. Implementations must be
/// deterministic.
pub trait PowerOracle {
    fn measure(&self, cfg: &PhaseConfig) -> Result<f64>;
}

impl<F> PowerOracle for F
where
    F: Fn(&PhaseConfig) -> Result<f64>,
{
    fn measure(&self, cfg: &PhaseConfig) -> Result<f64> {
        self(cfg)
    }
}

/// Power of one transmitted signal as received at one user, summed
/// coherently over every RIS element.
#[derive(Debug, Clone, Copy)]
pub struct ReceivedPower<'a> {
    pub channels: &'a ChannelSet,
    pub source: Source,
    pub user: User,
    pub tx_power_w: f64,
}

impl<'a> ReceivedPower<'a> {
    /// The objective that partition `which` is tuned for: communication
    /// signal at Bob for `r_b`, artificial noise at Eve for `r_e`.
    pub fn for_partition(channels: &'a ChannelSet, which: Partition, tx_power_w: f64) -> Self {
        let (source, user) = match which {
            Partition::Bob => (Source::Cs, User::Bob),
            Partition::Eve => (Source::An, User::Eve),
        };
        ReceivedPower { channels, source, user, tx_power_w }
    }
}

impl PowerOracle for ReceivedPower<'_> {
    fn measure(&self, cfg: &PhaseConfig) -> Result<f64> {
        let g = self.channels.coherent_response(self.source, self.user, &cfg.phases())?;
        Ok(self.tx_power_w * g.norm_sqr())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    /// 1-based trial number within the run.
    pub trial: usize,
    /// Power measured at this trial.
    pub power: f64,
    pub best: f64,
    /// Element index (iterative) or sweep position (codebook) probed.
    pub probe: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OptimizationTrace {
    pub entries: Vec<TraceEntry>,
}

impl OptimizationTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn best(&self) -> Option<f64> {
        self.entries.last().map(|e| e.best)
    }

    pub fn is_monotone(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].best >= w[0].best && w[1].trial > w[0].trial)
    }
}
