//! One-dimensional power-split search. With `alpha2 = 1 - alpha1` the
//! allocation problem has a single free variable, so a uniform grid
//! followed by golden-section refinement of the best feasible bracket is
//! enough.

use crate::channel::{ChannelSet, Source};
use crate::error::{Error, Result};
use crate::ris::PhaseConfig;
use crate::scene::ScenarioConfig;
use crate::secrecy::{beta_terms, CapacityReport, LinkPowers, PowerSplit, SecrecyThresholds, BETA_ROUTES};

/// Absolute tolerance on SINR constraint checks.
pub const SINR_TOL: f64 = 1e-9;
/// Golden-section stopping width in alpha.
pub const ALPHA_TOL: f64 = 1e-5;
/// Relative distance to a threshold within which a constraint is reported
/// as active.
const BINDING_REL: f64 = 1e-3;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    None,
    /// Bob's minimum capacity.
    Bob,
    /// Eve's maximum capacity.
    Eve,
    Both,
}

impl Binding {
    fn from_flags(bob: bool, eve: bool) -> Self {
        match (bob, eve) {
            (false, false) => Binding::None,
            (true, false) => Binding::Bob,
            (false, true) => Binding::Eve,
            (true, true) => Binding::Both,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Binding::None => "none",
            Binding::Bob => "C1",
            Binding::Eve => "C2",
            Binding::Both => "C1+C2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationSolution {
    pub alpha1: f64,
    pub feasible: bool,
    pub report: CapacityReport,
    /// Active constraints when feasible, violated ones otherwise.
    pub binding: Binding,
}

/// β terms at full power share for each signal; any split is obtained by
/// scaling with `√alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaProfile {
    unit: [f64; 8],
    noise_bob: f64,
    noise_eve: f64,
}

fn is_cs(k: usize) -> bool {
    BETA_ROUTES[k].0 == Source::Cs
}

impl AlphaProfile {
    pub fn new(sc: &ScenarioConfig, ch: &ChannelSet, cfg: &PhaseConfig) -> Result<Self> {
        let cs = beta_terms(sc, ch, cfg, PowerSplit::new(1.0)?)?;
        let an = beta_terms(sc, ch, cfg, PowerSplit::new(0.0)?)?;
        let mut unit = [0.0; 8];
        for (k, u) in unit.iter_mut().enumerate() {
            *u = if is_cs(k) { cs.beta[k] } else { an.beta[k] };
        }
        Ok(AlphaProfile { unit, noise_bob: cs.noise_bob, noise_eve: cs.noise_eve })
    }

    pub fn link_powers(&self, alpha1: f64) -> LinkPowers {
        let (s1, s2) = (alpha1.sqrt(), (1.0 - alpha1).max(0.0).sqrt());
        let mut beta = self.unit;
        for (k, b) in beta.iter_mut().enumerate() {
            *b *= if is_cs(k) { s1 } else { s2 };
        }
        LinkPowers { beta, noise_bob: self.noise_bob, noise_eve: self.noise_eve }
    }

    pub fn report(&self, alpha1: f64) -> Result<CapacityReport> {
        CapacityReport::from_link_powers(&self.link_powers(alpha1))
    }

    /// Maximizes secrecy capacity over `alpha1 ∈ [0, 1]` subject to
    /// `sinr_bob ≥ γ_b` and `sinr_eve ≤ γ_e`.
    pub fn solve(&self, th: &SecrecyThresholds, grid: usize) -> Result<AllocationSolution> {
        if grid < 2 {
            return Err(Error::invalid(format!("alpha grid needs at least 2 points, got {grid}")));
        }
        let xs = grid_points(grid);
        let reports = xs.iter().map(|&a| self.report(a)).collect::<Result<Vec<_>>>()?;

        let best = reports
            .iter()
            .enumerate()
            .filter(|(_, r)| feasible(r, th))
            .fold(None::<(usize, f64)>, |acc, (i, r)| match acc {
                Some((_, v)) if v >= r.c_secrecy => acc,
                _ => Some((i, r.c_secrecy)),
            });

        let Some((i, _)) = best else {
            let i = argmin(reports.iter().map(|r| violation(r, th)));
            let (lo, hi) = bracket(&xs, i);
            let mut fail: Option<Error> = None;
            let (a, _) = golden_max(
                |a| match self.report(a) {
                    Ok(r) => -violation(&r, th),
                    Err(e) => {
                        fail.get_or_insert(e);
                        f64::NEG_INFINITY
                    }
                },
                lo,
                hi,
                xs[i],
            );
            if let Some(e) = fail {
                return Err(e);
            }
            let report = self.report(a)?;
            let binding = Binding::from_flags(
                report.sinr_bob < th.gamma_bob_min - SINR_TOL,
                report.sinr_eve > th.gamma_eve_max + SINR_TOL,
            );
            return Ok(AllocationSolution { alpha1: a, feasible: false, report, binding });
        };

        let (lo, hi) = bracket(&xs, i);
        let mut incumbent = (xs[i], reports[i]);
        let mut fail: Option<Error> = None;
        golden_max(
            |a| match self.report(a) {
                Ok(r) if feasible(&r, th) => {
                    if r.c_secrecy > incumbent.1.c_secrecy {
                        incumbent = (a, r);
                    }
                    r.c_secrecy
                }
                Ok(r) => -1.0 - violation(&r, th),
                Err(e) => {
                    fail.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            },
            lo,
            hi,
            xs[i],
        );
        if let Some(e) = fail {
            return Err(e);
        }
        let (alpha1, report) = incumbent;
        let near = |v: f64, t: f64| t.is_finite() && t > 0.0 && (v - t).abs() <= BINDING_REL * t + SINR_TOL;
        let binding = Binding::from_flags(near(report.sinr_bob, th.gamma_bob_min), near(report.sinr_eve, th.gamma_eve_max));
        Ok(AllocationSolution { alpha1, feasible: true, report, binding })
    }

    /// Largest `alpha1` whose Eve capacity stays within `ratio` of Bob's.
    pub fn capacity_ratio_alpha(&self, ratio: f64, grid: usize) -> Result<f64> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::invalid(format!("capacity ratio must lie in (0, 1), got {ratio}")));
        }
        if grid < 2 {
            return Err(Error::invalid(format!("alpha grid needs at least 2 points, got {grid}")));
        }
        let ok = |a: f64| -> Result<bool> {
            let r = self.report(a)?;
            Ok(r.c_bob > 0.0 && r.c_eve <= ratio * r.c_bob)
        };
        let xs = grid_points(grid);
        let mut last = None;
        for (i, &a) in xs.iter().enumerate().skip(1) {
            if ok(a)? {
                last = Some(i);
            }
        }
        let i = last.ok_or_else(|| Error::NoFeasibleSplit(format!("no alpha1 keeps Eve within {ratio} of Bob")))?;
        if i + 1 == xs.len() {
            return Ok(xs[i]);
        }
        let (mut lo, mut hi) = (xs[i], xs[i + 1]);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if ok(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

fn grid_points(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn bracket(xs: &[f64], i: usize) -> (f64, f64) {
    (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)])
}

fn feasible(r: &CapacityReport, th: &SecrecyThresholds) -> bool {
    r.sinr_bob >= th.gamma_bob_min - SINR_TOL && r.sinr_eve <= th.gamma_eve_max + SINR_TOL
}

/// Constraint shortfall in bits/s/Hz.
fn violation(r: &CapacityReport, th: &SecrecyThresholds) -> f64 {
    let bob = (th.min_bob_capacity() - r.c_bob).max(0.0);
    let eve = if th.gamma_eve_max.is_finite() { (r.c_eve - th.max_eve_capacity()).max(0.0) } else { 0.0 };
    bob + eve
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    values
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, v)| if v < bv { (i, v) } else { (bi, bv) })
        .0
}

/// Golden-section maximization of `f` on `[lo, hi]`; returns the best
/// evaluated point, seeded with `start`.
fn golden_max(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, start: f64) -> (f64, f64) {
    let mut best = (start, f(start));
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    while hi - lo > ALPHA_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

pub fn optimize_alpha(
    sc: &ScenarioConfig,
    ch: &ChannelSet,
    cfg: &PhaseConfig,
    th: &SecrecyThresholds,
    grid: usize,
) -> Result<AllocationSolution> {
    AlphaProfile::new(sc, ch, cfg)?.solve(th, grid)
}

pub fn capacity_ratio_alpha(sc: &ScenarioConfig, ch: &ChannelSet, cfg: &PhaseConfig, ratio: f64, grid: usize) -> Result<f64> {
    AlphaProfile::new(sc, ch, cfg)?.capacity_ratio_alpha(ratio, grid)
}
