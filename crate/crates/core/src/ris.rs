//! Binary-phase RIS configurations, the Bob/Eve surface partition and the
//! quantized-DFT sweep codebook.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scene::RisGeometry;

/// Half of the surface: `Bob` steers the communication signal to Bob,
/// `Eve` steers the artificial noise to Eve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partition {
    Bob,
    Eve,
}

impl Partition {
    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Bob => "r_b",
            Partition::Eve => "r_e",
        }
    }

    pub fn other(self) -> Partition {
        match self {
            Partition::Bob => Partition::Eve,
            Partition::Eve => Partition::Bob,
        }
    }
}

/// Disjoint element index sets of equal size covering `0..N`. Indices in
/// each set are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSplit {
    bob: Vec<usize>,
    eve: Vec<usize>,
}

impl PartitionSplit {
    /// Left half of the columns to Eve, right half to Bob.
    pub fn from_geometry(g: &RisGeometry) -> Self {
        let (bob, eve) = (0..g.len()).partition(|&n| g.is_bob_element(n));
        PartitionSplit { bob, eve }
    }

    /// First `n/2` indices to Eve, the rest to Bob.
    pub fn contiguous(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::invalid(format!("element count must be even, got {n}")));
        }
        Ok(PartitionSplit { eve: (0..n / 2).collect(), bob: (n / 2..n).collect() })
    }

    pub fn new(bob: Vec<usize>, eve: Vec<usize>) -> Result<Self> {
        let n = bob.len() + eve.len();
        if bob.len() != eve.len() {
            return Err(Error::invalid("partitions must have equal size"));
        }
        let mut seen = vec![false; n];
        for &i in bob.iter().chain(&eve) {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid(format!("partition index {i} repeated or out of range")));
            }
        }
        let (mut bob, mut eve) = (bob, eve);
        bob.sort_unstable();
        eve.sort_unstable();
        Ok(PartitionSplit { bob, eve })
    }

    pub fn indices(&self, p: Partition) -> &[usize] {
        match p {
            Partition::Bob => &self.bob,
            Partition::Eve => &self.eve,
        }
    }

    pub fn len(&self) -> usize {
        self.bob.len() + self.eve.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn half(&self) -> usize {
        self.bob.len()
    }
}

/// Binary phase for a radian value; accepts only 0 and π.
pub fn phase_to_bit(rad: f64) -> Result<bool> {
    const TOL: f64 = 1e-9;
    if rad.abs() <= TOL {
        Ok(false)
    } else if (rad - PI).abs() <= TOL {
        Ok(true)
    } else {
        Err(Error::invalid(format!("phase {rad} rad is not binary (0 or π)")))
    }
}

pub fn bit_to_phase(bit: bool) -> f64 {
    if bit {
        PI
    } else {
        0.0
    }
}

/// Phases of every element (`true` = π) plus the partition split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseConfig {
    bits: Vec<bool>,
    split: PartitionSplit,
}

/// All-zero configuration with the contiguous split.
pub fn zero_config(n: usize) -> Result<PhaseConfig> {
    Ok(PhaseConfig::zero(PartitionSplit::contiguous(n)?))
}

impl PhaseConfig {
    pub fn zero(split: PartitionSplit) -> Self {
        PhaseConfig { bits: vec![false; split.len()], split }
    }

    pub fn from_bits(bits: Vec<bool>, split: PartitionSplit) -> Result<Self> {
        if bits.len() != split.len() {
            return Err(Error::invalid(format!(
                "{} phases for a {}-element split",
                bits.len(),
                split.len()
            )));
        }
        Ok(PhaseConfig { bits, split })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn split(&self) -> &PartitionSplit {
        &self.split
    }

    pub fn phases(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| bit_to_phase(b)).collect()
    }

    pub fn partition_bits(&self, which: Partition) -> Vec<bool> {
        self.split.indices(which).iter().map(|&n| self.bits[n]).collect()
    }

    /// New configuration with `which` replaced by `bits` (in the
    /// partition's ascending index order).
    pub fn with_partition_bits(&self, which: Partition, bits: &[bool]) -> Result<Self> {
        let idx = self.split.indices(which);
        if bits.len() != idx.len() {
            return Err(Error::invalid(format!(
                "partition {} has {} elements, got {}",
                which.as_str(),
                idx.len(),
                bits.len()
            )));
        }
        let mut out = self.clone();
        for (&n, &b) in idx.iter().zip(bits) {
            out.bits[n] = b;
        }
        Ok(out)
    }

    pub fn with_element(&self, n: usize, bit: bool) -> Self {
        let mut out = self.clone();
        out.bits[n] = bit;
        out
    }

    /// Bits as `0`/`1` separated by commas.
    pub fn to_line(&self) -> String {
        let mut s = String::with_capacity(self.bits.len() * 2);
        for (i, &b) in self.bits.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push(if b { '1' } else { '0' });
        }
        s
    }

    pub fn from_line(line: &str, split: PartitionSplit) -> Result<Self> {
        let bits = line
            .trim()
            .split(',')
            .map(|t| match t.trim() {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::invalid(format!("expected 0 or 1, got {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits, split)
    }
}

/// Replaces one partition of `cfg` with radian phases `partition_phases`.
pub fn set_partition(cfg: &PhaseConfig, which: Partition, partition_phases: &[f64]) -> Result<PhaseConfig> {
    let bits = partition_phases.iter().map(|&p| phase_to_bit(p)).collect::<Result<Vec<_>>>()?;
    cfg.with_partition_bits(which, &bits)
}

/// Distinct binary codewords for one partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    codewords: Vec<Vec<bool>>,
}

impl Codebook {
    pub fn new(codewords: Vec<Vec<bool>>) -> Result<Self> {
        if let Some(first) = codewords.first() {
            if codewords.iter().any(|c| c.len() != first.len()) {
                return Err(Error::invalid("codewords must share one length"));
            }
        }
        for (i, c) in codewords.iter().enumerate() {
            if codewords[..i].contains(c) {
                return Err(Error::invalid(format!("codeword {i} is a duplicate")));
            }
        }
        Ok(Codebook { codewords })
    }

    pub fn codewords(&self) -> &[Vec<bool>] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.codewords.first().map_or(0, Vec::len)
    }

    /// Sweep sequence of at least `budget` entries: the codebook followed by
    /// seeded uniformly random binary vectors.
    pub fn padded_sweep(&self, budget: usize, seed: u64) -> Vec<Vec<bool>> {
        let mut out = self.codewords.clone();
        let dim = self.dimension();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while out.len() < budget {
            out.push((0..dim).map(|_| rng.gen::<bool>()).collect());
        }
        out
    }
}

/// Quantizes the columns of the `m`-point DFT matrix to {0, π} and keeps
/// the distinct results in column order. Entries exactly at ±90° map to 0.
pub fn binary_dft_codebook(m: usize) -> Result<Codebook> {
    if !m.is_power_of_two() {
        return Err(Error::invalid(format!("codebook size must be a power of two, got {m}")));
    }
    let mut codewords: Vec<Vec<bool>> = Vec::new();
    for k in 0..m {
        // phase of e^{-j2πkn/m} is 2π·t/m with t = k·n mod m; nearer π iff m/4 < t < 3m/4
        let word: Vec<bool> = (0..m)
            .map(|n| {
                let t = (k * n) % m;
                4 * t > m && 4 * t < 3 * m
            })
            .collect();
        if !codewords.contains(&word) {
            codewords.push(word);
        }
    }
    Codebook::new(codewords)
}
