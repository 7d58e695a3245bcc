//! Line-of-sight element channels and cascaded RIS gains.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ris::{Partition, PartitionSplit};
use crate::scene::{distance, fspl, AntennaPattern, Mount, ScenarioConfig, Vec3};

/// `amplitude · e^{-j·phase}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementChannel {
    pub amplitude: f64,
    pub phase: f64,
}

impl ElementChannel {
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.amplitude, -self.phase)
    }
}

/// An antenna placed in the world: pattern plus orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aperture {
    pub pattern: AntennaPattern,
    pub mount: Mount,
}

impl Aperture {
    pub fn isotropic() -> Self {
        Aperture {
            pattern: AntennaPattern::isotropic(0.0),
            mount: Mount { boresight: Vec3::X, horizontal: Vec3::Y, up: Vec3::Z },
        }
    }

    pub fn gain_toward(&self, world_dir: Vec3) -> f64 {
        self.mount.gain(&self.pattern, world_dir)
    }
}

/// Free-space channel between two apertures. Reciprocal in its endpoints.
pub fn los_channel(a: Vec3, a_ap: &Aperture, b: Vec3, b_ap: &Aperture, fc: f64) -> Result<ElementChannel> {
    let d = distance(a, b);
    if d == 0.0 {
        return Err(Error::DegenerateGeometry(format!("coincident points at {a:?}")));
    }
    let loss = fspl(d, fc)?;
    let gain = a_ap.gain_toward(b - a) * b_ap.gain_toward(a - b);
    let lambda = crate::scene::SPEED_OF_LIGHT / fc;
    Ok(ElementChannel {
        amplitude: (loss * gain).sqrt(),
        phase: (TAU * d / lambda).rem_euclid(TAU),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Cs,
    An,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum User {
    Bob,
    Eve,
}

/// Per-element channels for the whole surface plus per-partition
/// path-loss factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub h_s: Vec<ElementChannel>,
    pub h_a: Vec<ElementChannel>,
    pub h_b: Vec<ElementChannel>,
    pub h_e: Vec<ElementChannel>,
    pub split: PartitionSplit,
    /// `L_{src,partition} · L_{partition,user}`, indexed by
    /// `[source][partition][user]`.
    path_loss: [[[f64; 2]; 2]; 2],
}

fn src_idx(s: Source) -> usize {
    match s {
        Source::Cs => 0,
        Source::An => 1,
    }
}

fn part_idx(p: Partition) -> usize {
    match p {
        Partition::Bob => 0,
        Partition::Eve => 1,
    }
}

fn user_idx(u: User) -> usize {
    match u {
        User::Bob => 0,
        User::Eve => 1,
    }
}

impl ChannelSet {
    pub fn len(&self) -> usize {
        self.h_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h_s.is_empty()
    }

    pub fn incoming(&self, s: Source) -> &[ElementChannel] {
        match s {
            Source::Cs => &self.h_s,
            Source::An => &self.h_a,
        }
    }

    pub fn outgoing(&self, u: User) -> &[ElementChannel] {
        match u {
            User::Bob => &self.h_b,
            User::Eve => &self.h_e,
        }
    }

    /// Path-loss product for the `source → partition → user` route.
    pub fn path_loss(&self, s: Source, p: Partition, u: User) -> f64 {
        self.path_loss[src_idx(s)][part_idx(p)][user_idx(u)]
    }

    /// Normalized cascaded gain of one route under `phases`.
    pub fn cascaded(&self, s: Source, p: Partition, u: User, phases: &[f64]) -> Result<Complex64> {
        cascaded_gain(self.incoming(s), self.outgoing(u), phases, self.split.indices(p))
    }

    /// Coherent received amplitude (in √W per √W transmitted) over the
    /// whole surface, without normalization.
    pub fn coherent_response(&self, s: Source, u: User, phases: &[f64]) -> Result<Complex64> {
        let all: Vec<usize> = (0..self.len()).collect();
        coherent_sum(self.incoming(s), self.outgoing(u), phases, &all)
    }
}

fn check_indices(lens: [usize; 3], indices: &[usize]) -> Result<()> {
    let len = lens.into_iter().min().unwrap_or(0);
    match indices.iter().find(|&&n| n >= len) {
        Some(&index) => Err(Error::IndexOutOfRange { index, len }),
        None => Ok(()),
    }
}

/// `Σ |h_in||h_out| e^{-j(φ_in + φ_out + θ)}` over `indices`.
pub fn coherent_sum(
    in_ch: &[ElementChannel],
    out_ch: &[ElementChannel],
    phases: &[f64],
    indices: &[usize],
) -> Result<Complex64> {
    check_indices([in_ch.len(), out_ch.len(), phases.len()], indices)?;
    Ok(indices
        .iter()
        .map(|&n| {
            let (a, b) = (in_ch[n], out_ch[n]);
            Complex64::from_polar(a.amplitude * b.amplitude, -(a.phase + b.phase + phases[n]))
        })
        .sum())
}

/// Mean of `|h_in||h_out|` over `indices`.
pub fn mean_amplitude(in_ch: &[ElementChannel], out_ch: &[ElementChannel], indices: &[usize]) -> Result<f64> {
    check_indices([in_ch.len(), out_ch.len(), usize::MAX], indices)?;
    if indices.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = indices.iter().map(|&n| in_ch[n].amplitude * out_ch[n].amplitude).sum();
    Ok(total / indices.len() as f64)
}

/// Cascaded gain with amplitudes normalized by their mean over `indices`,
/// so that uniform amplitudes contribute unit-magnitude terms. The
/// normalization is carried by the path-loss factor instead.
pub fn cascaded_gain(
    in_ch: &[ElementChannel],
    out_ch: &[ElementChannel],
    phases: &[f64],
    indices: &[usize],
) -> Result<Complex64> {
    let raw = coherent_sum(in_ch, out_ch, phases, indices)?;
    let mean = mean_amplitude(in_ch, out_ch, indices)?;
    Ok(if mean > 0.0 { raw / mean } else { Complex64::new(0.0, 0.0) })
}

pub fn build_channel_set(sc: &ScenarioConfig) -> Result<ChannelSet> {
    sc.validate()?;
    let elements = sc.ris.element_positions()?;
    let element_ap = Aperture { pattern: sc.ris_element_pattern, mount: sc.ris.mount()? };
    let rx_ap = Aperture::isotropic();

    let incoming = |tx: Vec3| -> Result<Vec<ElementChannel>> {
        let ap = Aperture { pattern: sc.tx_pattern, mount: sc.tx_mount(tx)? };
        elements.iter().map(|&e| los_channel(tx, &ap, e, &element_ap, sc.fc_hz)).collect()
    };
    let outgoing = |rx: Vec3| -> Result<Vec<ElementChannel>> {
        elements.iter().map(|&e| los_channel(e, &element_ap, rx, &rx_ap, sc.fc_hz)).collect()
    };

    let mut set = ChannelSet {
        h_s: incoming(sc.cs_tx)?,
        h_a: incoming(sc.an_tx)?,
        h_b: outgoing(sc.bob)?,
        h_e: outgoing(sc.eve)?,
        split: PartitionSplit::from_geometry(&sc.ris),
        path_loss: [[[0.0; 2]; 2]; 2],
    };
    for s in [Source::Cs, Source::An] {
        for p in [Partition::Bob, Partition::Eve] {
            for u in [User::Bob, User::Eve] {
                let m = mean_amplitude(set.incoming(s), set.outgoing(u), set.split.indices(p))?;
                set.path_loss[src_idx(s)][part_idx(p)][user_idx(u)] = m * m;
            }
        }
    }
    Ok(set)
}
