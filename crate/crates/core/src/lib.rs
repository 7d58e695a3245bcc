//! Simulation and optimization of a secrecy link in which a reconfigurable
//! intelligent surface is split in two: one half reflects the communication
//! signal toward the legitimate receiver (Bob), the other reflects an
//! artificial-noise signal toward the eavesdropper (Eve).
//!
//! The crate covers free-space channel synthesis for the surface
//! ([`scene`], [`channel`]), binary phase configurations and sweep
//! codebooks ([`ris`]), the capacity model ([`secrecy`]), the
//! measurement-driven phase search and the power-split solver
//! ([`optimize`]), and CSV-producing experiment drivers ([`harness`]).

pub mod channel;
pub mod error;
pub mod harness;
pub mod optimize;
pub mod ris;
pub mod scenario_file;
pub mod scene;
pub mod secrecy;

pub use channel::{build_channel_set, cascaded_gain, los_channel, ChannelSet, ElementChannel, Source, User};
pub use error::{Error, Result};
pub use optimize::{
    capacity_ratio_alpha, dft_sweep, exhaustive_search, iterative_optimize, optimize_alpha, AllocationSolution,
    OptimizationTrace, PowerOracle, ReceivedPower,
};
pub use ris::{binary_dft_codebook, set_partition, zero_config, Codebook, Partition, PartitionSplit, PhaseConfig};
pub use scene::{distance, fspl, pattern_gain, AntennaPattern, RisGeometry, ScenarioConfig, Vec3};
pub use secrecy::{
    beta_terms, bob_capacity, eve_capacity, secrecy_capacity, sinr_values, CapacityReport, LinkPowers, PowerSplit,
    SecrecyThresholds,
};
