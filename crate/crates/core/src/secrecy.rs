//! Received-signal decomposition at Bob and Eve, their capacities and the
//! resulting secrecy capacity.

use crate::channel::{ChannelSet, Source, User};
use crate::error::{Error, Result};
use crate::ris::{Partition, PhaseConfig};
use crate::scene::{linear_to_db, ScenarioConfig};

/// Split of the total transmit power between the communication signal
/// (`alpha1`) and the artificial noise (`alpha2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl PowerSplit {
    pub fn new(alpha1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha1) {
            return Err(Error::invalid(format!("alpha1 must lie in [0, 1], got {alpha1}")));
        }
        Ok(PowerSplit { alpha1, alpha2: 1.0 - alpha1 })
    }
}

/// The eight route components (`β1..β8`, in √W) and the two noise powers.
///
/// Bob receives β1 (CS via r_b), β2 (CS via r_e), β3 (AN via r_e) and β4
/// (AN via r_b); Eve receives β5 (AN via r_e), β6 (AN via r_b), β7 (CS via
/// r_b) and β8 (CS via r_e).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPowers {
    pub beta: [f64; 8],
    pub noise_bob: f64,
    pub noise_eve: f64,
}

/// Route of each β term, in order.
pub const BETA_ROUTES: [(Source, Partition, User); 8] = [
    (Source::Cs, Partition::Bob, User::Bob),
    (Source::Cs, Partition::Eve, User::Bob),
    (Source::An, Partition::Eve, User::Bob),
    (Source::An, Partition::Bob, User::Bob),
    (Source::An, Partition::Eve, User::Eve),
    (Source::An, Partition::Bob, User::Eve),
    (Source::Cs, Partition::Bob, User::Eve),
    (Source::Cs, Partition::Eve, User::Eve),
];

impl LinkPowers {
    fn sq(&self, k: usize) -> f64 {
        self.beta[k - 1] * self.beta[k - 1]
    }

    pub fn bob_signal(&self) -> f64 {
        self.sq(1) + self.sq(2)
    }

    pub fn bob_interference(&self) -> f64 {
        self.sq(3) + self.sq(4)
    }

    pub fn eve_signal(&self) -> f64 {
        self.sq(7) + self.sq(8)
    }

    pub fn eve_interference(&self) -> f64 {
        self.sq(5) + self.sq(6)
    }
}

fn ratio(num: f64, interference: f64, noise: f64, at: &'static str) -> Result<f64> {
    let den = interference + noise;
    if den <= 0.0 {
        return Err(Error::InfiniteCapacity(at));
    }
    Ok(num / den)
}

/// `(sinr_bob, sinr_eve)` as linear ratios.
pub fn sinr_values(lp: &LinkPowers) -> Result<(f64, f64)> {
    Ok((
        ratio(lp.bob_signal(), lp.bob_interference(), lp.noise_bob, "bob")?,
        ratio(lp.eve_signal(), lp.eve_interference(), lp.noise_eve, "eve")?,
    ))
}

pub fn bob_capacity(lp: &LinkPowers) -> Result<f64> {
    Ok(capacity_from_sinr(ratio(lp.bob_signal(), lp.bob_interference(), lp.noise_bob, "bob")?))
}

pub fn eve_capacity(lp: &LinkPowers) -> Result<f64> {
    Ok(capacity_from_sinr(ratio(lp.eve_signal(), lp.eve_interference(), lp.noise_eve, "eve")?))
}

pub fn secrecy_capacity(c_bob: f64, c_eve: f64) -> f64 {
    (c_bob - c_eve).max(0.0)
}

/// `log2(1 + sinr)`.
pub fn capacity_from_sinr(sinr: f64) -> f64 {
    (1.0 + sinr).log2()
}

/// Inverse of [`capacity_from_sinr`].
pub fn sinr_from_capacity(c: f64) -> f64 {
    c.exp2() - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityReport {
    pub c_bob: f64,
    pub c_eve: f64,
    pub c_secrecy: f64,
    pub sinr_bob: f64,
    pub sinr_eve: f64,
}

impl CapacityReport {
    pub fn from_link_powers(lp: &LinkPowers) -> Result<Self> {
        let (sinr_bob, sinr_eve) = sinr_values(lp)?;
        let (c_bob, c_eve) = (capacity_from_sinr(sinr_bob), capacity_from_sinr(sinr_eve));
        Ok(CapacityReport { c_bob, c_eve, c_secrecy: secrecy_capacity(c_bob, c_eve), sinr_bob, sinr_eve })
    }

    pub fn sinr_bob_db(&self) -> f64 {
        linear_to_db(self.sinr_bob)
    }

    pub fn sinr_eve_db(&self) -> f64 {
        linear_to_db(self.sinr_eve)
    }
}

/// Minimum SINR for Bob and maximum SINR for Eve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyThresholds {
    pub gamma_bob_min: f64,
    pub gamma_eve_max: f64,
}

impl SecrecyThresholds {
    pub fn new(gamma_bob_min: f64, gamma_eve_max: f64) -> Result<Self> {
        if gamma_bob_min.is_nan() || gamma_bob_min < 0.0 || gamma_eve_max.is_nan() || gamma_eve_max < 0.0 {
            return Err(Error::invalid(format!(
                "thresholds must be non-negative, got bob {gamma_bob_min}, eve {gamma_eve_max}"
            )));
        }
        Ok(SecrecyThresholds { gamma_bob_min, gamma_eve_max })
    }

    /// Eve's limit expressed as `eta · gamma_bob_min`; an infinite `eta`
    /// leaves Eve unconstrained.
    pub fn from_eta(gamma_bob_min: f64, eta: f64) -> Result<Self> {
        if !(gamma_bob_min > 0.0) {
            return Err(Error::invalid(format!("gamma_bob_min must be positive, got {gamma_bob_min}")));
        }
        if eta.is_nan() || eta < 0.0 {
            return Err(Error::invalid(format!("eta must be non-negative, got {eta}")));
        }
        let eve = if eta.is_infinite() { f64::INFINITY } else { eta * gamma_bob_min };
        Self::new(gamma_bob_min, eve)
    }

    pub fn unconstrained() -> Self {
        SecrecyThresholds { gamma_bob_min: 0.0, gamma_eve_max: f64::INFINITY }
    }

    pub fn eta(&self) -> f64 {
        self.gamma_eve_max / self.gamma_bob_min
    }

    pub fn min_bob_capacity(&self) -> f64 {
        capacity_from_sinr(self.gamma_bob_min)
    }

    pub fn max_eve_capacity(&self) -> f64 {
        capacity_from_sinr(self.gamma_eve_max)
    }
}

fn check_consistent(ch: &ChannelSet, cfg: &PhaseConfig) -> Result<()> {
    if cfg.len() != ch.len() || cfg.split() != &ch.split {
        return Err(Error::invalid(format!(
            "phase configuration ({} elements) does not match the channel set ({} elements)",
            cfg.len(),
            ch.len()
        )));
    }
    Ok(())
}

/// β terms for a phase configuration and power split:
/// `β = √(α·P_t·L) · |G|` per route.
pub fn beta_terms(sc: &ScenarioConfig, ch: &ChannelSet, cfg: &PhaseConfig, split: PowerSplit) -> Result<LinkPowers> {
    check_consistent(ch, cfg)?;
    let phases = cfg.phases();
    let pt = sc.pt_watts();
    let mut beta = [0.0; 8];
    for (b, &(s, p, u)) in beta.iter_mut().zip(BETA_ROUTES.iter()) {
        let alpha = match s {
            Source::Cs => split.alpha1,
            Source::An => split.alpha2,
        };
        let g = ch.cascaded(s, p, u, &phases)?;
        *b = (alpha * pt * ch.path_loss(s, p, u)).sqrt() * g.norm();
    }
    Ok(LinkPowers { beta, noise_bob: sc.noise_bob_watts(), noise_eve: sc.noise_eve_watts() })
}

/// SINRs assembled from per-route path losses and squared cascaded gains,
/// with the power split and transmit power factored out of each sum.
pub fn link_budget_sinr(sc: &ScenarioConfig, ch: &ChannelSet, cfg: &PhaseConfig, split: PowerSplit) -> Result<(f64, f64)> {
    check_consistent(ch, cfg)?;
    let phases = cfg.phases();
    let term = |s: Source, p: Partition, u: User| -> Result<f64> {
        Ok(ch.path_loss(s, p, u) * ch.cascaded(s, p, u, &phases)?.norm_sqr())
    };
    let pt = sc.pt_watts();
    let bob_sig = split.alpha1 * pt * (term(Source::Cs, Partition::Bob, User::Bob)? + term(Source::Cs, Partition::Eve, User::Bob)?);
    let bob_int = split.alpha2 * pt * (term(Source::An, Partition::Eve, User::Bob)? + term(Source::An, Partition::Bob, User::Bob)?);
    let eve_sig = split.alpha1 * pt * (term(Source::Cs, Partition::Bob, User::Eve)? + term(Source::Cs, Partition::Eve, User::Eve)?);
    let eve_int = split.alpha2 * pt * (term(Source::An, Partition::Eve, User::Eve)? + term(Source::An, Partition::Bob, User::Eve)?);
    Ok((
        ratio(bob_sig, bob_int, sc.noise_bob_watts(), "bob")?,
        ratio(eve_sig, eve_int, sc.noise_eve_watts(), "eve")?,
    ))
}

pub fn capacity_report(sc: &ScenarioConfig, ch: &ChannelSet, cfg: &PhaseConfig, split: PowerSplit) -> Result<CapacityReport> {
    CapacityReport::from_link_powers(&beta_terms(sc, ch, cfg, split)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::build_channel_set;
    use crate::ris::PhaseConfig;
    use approx::assert_relative_eq;

    fn lp(beta: [f64; 8], noise: f64) -> LinkPowers {
        LinkPowers { beta, noise_bob: noise, noise_eve: noise }
    }

    #[test]
    fn bob_capacity_examples() {
        let s = std::f64::consts::SQRT_2;
        assert_relative_eq!(bob_capacity(&lp([1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 2.0)).unwrap(), 1.0);
        assert_eq!(bob_capacity(&lp([0.0; 8], 1.0)).unwrap(), 0.0);
        assert_relative_eq!(bob_capacity(&lp([2.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0], 2.0)).unwrap(), 1.0);
        assert_relative_eq!(bob_capacity(&lp([s, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 2.0)).unwrap(), 1.0, epsilon = 1e-15);
        assert!(matches!(bob_capacity(&lp([1.0; 8].map(|_| 0.0), 0.0)), Err(Error::InfiniteCapacity(_))));
    }

    #[test]
    fn eve_capacity_examples() {
        assert_eq!(eve_capacity(&lp([1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0], 1.0)).unwrap(), 0.0);
        let mut prev = f64::MAX;
        for jam in [1.0, 10.0, 100.0, 1e4, 1e6] {
            let c = eve_capacity(&lp([0.0, 0.0, 0.0, 0.0, jam, jam, 1.0, 1.0], 1.0)).unwrap();
            assert!(c < prev);
            prev = c;
        }
        assert!(prev < 1e-11);
        // β7² + β8² = 3 (β5² + β6² + σ²)
        let b = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 3.0, 0.0];
        assert_relative_eq!(eve_capacity(&lp(b, 1.0)).unwrap(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn secrecy_examples() {
        assert_eq!(secrecy_capacity(3.0, 1.0), 2.0);
        assert_eq!(secrecy_capacity(1.0, 1.0), 0.0);
        assert_eq!(secrecy_capacity(1.0, 3.0), 0.0);
    }

    #[test]
    fn sinr_examples() {
        let l = lp([1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 2.0);
        assert_relative_eq!(sinr_values(&l).unwrap().0, 1.0);
        assert_eq!(sinr_values(&lp([0.0; 8], 1.0)).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn thresholds() {
        let t = SecrecyThresholds::from_eta(2.0, 0.1).unwrap();
        assert_relative_eq!(t.gamma_eve_max, 0.2);
        assert_relative_eq!(t.eta(), 0.1);
        assert_relative_eq!(t.min_bob_capacity(), 3f64.log2());
        let u = SecrecyThresholds::from_eta(2.0, f64::INFINITY).unwrap();
        assert!(u.gamma_eve_max.is_infinite());
        assert!(SecrecyThresholds::from_eta(0.0, 0.1).is_err());
        assert!(SecrecyThresholds::new(-1.0, 0.1).is_err());
    }

    #[test]
    fn beta_terms_degenerate_splits() {
        let sc = ScenarioConfig::reference();
        let ch = build_channel_set(&sc).unwrap();
        let cfg = PhaseConfig::zero(ch.split.clone());
        let b = beta_terms(&sc, &ch, &cfg, PowerSplit::new(1.0).unwrap()).unwrap().beta;
        assert!(b[2] == 0.0 && b[3] == 0.0 && b[4] == 0.0 && b[5] == 0.0);
        assert!(b[0] > 0.0 && b[6] > 0.0);
        let b = beta_terms(&sc, &ch, &cfg, PowerSplit::new(0.0).unwrap()).unwrap().beta;
        assert!(b[0] == 0.0 && b[1] == 0.0 && b[6] == 0.0 && b[7] == 0.0);
    }

    #[test]
    fn beta_terms_mirror_symmetric_reference() {
        // the reference layout is its own y-mirror
        let sc = ScenarioConfig::reference();
        assert_eq!(sc.mirrored(), sc);
        let ch = build_channel_set(&sc).unwrap();
        let cfg = PhaseConfig::zero(ch.split.clone());
        let b = beta_terms(&sc, &ch, &cfg, PowerSplit::new(0.5).unwrap()).unwrap().beta;
        for (i, j) in [(0, 4), (1, 5), (2, 6), (3, 7)] {
            assert_relative_eq!(b[i], b[j], max_relative = 1e-9);
        }
    }

    #[test]
    fn mismatched_config_rejected() {
        let sc = ScenarioConfig::reference();
        let ch = build_channel_set(&sc).unwrap();
        let cfg = crate::ris::zero_config(256).unwrap();
        assert!(beta_terms(&sc, &ch, &cfg, PowerSplit::new(0.5).unwrap()).is_err());
        assert!(PowerSplit::new(1.5).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn powers() -> impl Strategy<Value = LinkPowers> {
            (proptest::array::uniform8(0.0f64..10.0), 1e-6f64..10.0, 1e-6f64..10.0)
                .prop_map(|(beta, noise_bob, noise_eve)| LinkPowers { beta, noise_bob, noise_eve })
        }

        proptest! {
            #[test]
            fn secrecy_non_negative(cb in 0.0f64..20.0, ce in 0.0f64..20.0) {
                let s = secrecy_capacity(cb, ce);
                prop_assert!(s >= 0.0);
                if ce >= cb { prop_assert_eq!(s, 0.0); }
            }

            #[test]
            fn capacity_matches_sinr(l in powers()) {
                let (sb, se) = sinr_values(&l).unwrap();
                let cb = bob_capacity(&l).unwrap();
                let ce = eve_capacity(&l).unwrap();
                prop_assert!(((1.0 + sb).log2() - cb).abs() <= 1e-12 * cb.max(1e-300));
                prop_assert!(((1.0 + se).log2() - ce).abs() <= 1e-12 * ce.max(1e-300));
            }

            #[test]
            fn bob_monotone(l in powers(), d in 0.01f64..5.0) {
                let base = bob_capacity(&l).unwrap();
                let mut up = l; up.beta[0] += d;
                let mut jam = l; jam.beta[2] += d;
                prop_assert!(bob_capacity(&up).unwrap() > base);
                prop_assert!(bob_capacity(&jam).unwrap() < base || base == 0.0);
            }
        }
    }
}
