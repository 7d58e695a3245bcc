//! Physical scenario: node placement, RIS lattice, antenna patterns and the
//! radiometric primitives (free-space loss, pattern gain) built on them.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A point or direction in 3-D space, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Unit vector along `self`, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Mirror image across the y = 0 plane.
    pub fn mirror_y(self) -> Vec3 {
        Vec3::new(self.x, -self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

pub fn distance(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

/// Free-space power attenuation `(λ / 4πd)²` as a linear factor.
pub fn fspl(d: f64, fc: f64) -> Result<f64> {
    if !(fc > 0.0) || !fc.is_finite() {
        return Err(Error::invalid(format!("carrier frequency must be positive, got {fc}")));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::DegenerateGeometry(format!("path length {d} m")));
    }
    let lambda = SPEED_OF_LIGHT / fc;
    Ok((lambda / (4.0 * PI * d)).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Cosine,
    Isotropic,
}

impl PatternKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PatternKind::Cosine => "cosine",
            PatternKind::Isotropic => "isotropic",
        }
    }
}

impl std::str::FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" => Ok(PatternKind::Cosine),
            "isotropic" => Ok(PatternKind::Isotropic),
            other => Err(Error::invalid(format!("unknown pattern kind {other:?}"))),
        }
    }
}

/// Power radiation pattern of a single aperture, expressed in its own frame
/// (+x boresight, +y horizontal, +z up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    pub kind: PatternKind,
    pub azimuth_exponent: f64,
    pub elevation_exponent: f64,
    pub boresight_gain_dbi: f64,
}

impl AntennaPattern {
    pub fn cosine(boresight_gain_dbi: f64) -> Self {
        AntennaPattern {
            kind: PatternKind::Cosine,
            azimuth_exponent: 1.0,
            elevation_exponent: 1.0,
            boresight_gain_dbi,
        }
    }

    pub fn isotropic(gain_dbi: f64) -> Self {
        AntennaPattern {
            kind: PatternKind::Isotropic,
            azimuth_exponent: 0.0,
            elevation_exponent: 0.0,
            boresight_gain_dbi: gain_dbi,
        }
    }

    pub fn with_kind(self, kind: PatternKind) -> Self {
        match kind {
            PatternKind::Cosine => AntennaPattern { kind, ..self },
            PatternKind::Isotropic => AntennaPattern::isotropic(self.boresight_gain_dbi),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(self.azimuth_exponent) || !ok(self.elevation_exponent) {
            return Err(Error::invalid("pattern exponents must be finite and non-negative"));
        }
        if !self.boresight_gain_dbi.is_finite() {
            return Err(Error::invalid("boresight gain must be finite"));
        }
        Ok(())
    }
}

/// Linear power gain of `p` toward `direction`, given in the pattern frame.
///
/// Cosine elements follow `cos(az)^(2a) · cos(el)^(2e)` on the front
/// hemisphere and are zero on or behind the aperture plane.
pub fn pattern_gain(p: &AntennaPattern, direction: Vec3) -> f64 {
    let peak = db_to_linear(p.boresight_gain_dbi);
    match p.kind {
        PatternKind::Isotropic => peak,
        PatternKind::Cosine => {
            let Some(d) = direction.normalized() else {
                return 0.0;
            };
            if d.x <= 0.0 {
                return 0.0;
            }
            let horiz = d.x.hypot(d.y);
            let cos_az = d.x / horiz;
            let cos_el = horiz.min(1.0);
            peak * cos_az.powf(2.0 * p.azimuth_exponent) * cos_el.powf(2.0 * p.elevation_exponent)
        }
    }
}

/// Orientation of an aperture: world-frame axes of the pattern frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mount {
    pub boresight: Vec3,
    pub horizontal: Vec3,
    pub up: Vec3,
}

impl Mount {
    /// Frame with the given boresight and the world +z axis kept as close to
    /// "up" as possible.
    pub fn facing(boresight: Vec3) -> Result<Self> {
        let b = boresight
            .normalized()
            .ok_or_else(|| Error::DegenerateGeometry("zero-length boresight".into()))?;
        let horizontal = Vec3::Z
            .cross(b)
            .normalized()
            .unwrap_or_else(|| b.cross(Vec3::X).normalized().unwrap_or(Vec3::Y));
        let up = b.cross(horizontal);
        Ok(Mount { boresight: b, horizontal, up })
    }

    pub fn to_local(&self, world: Vec3) -> Vec3 {
        Vec3::new(world.dot(self.boresight), world.dot(self.horizontal), world.dot(self.up))
    }

    /// Gain of `p` mounted in this frame toward the world direction `world`.
    pub fn gain(&self, p: &AntennaPattern, world: Vec3) -> f64 {
        pattern_gain(p, self.to_local(world))
    }
}

/// Uniform rectangular RIS lattice.
///
/// Element `n` (0-based, row-major) sits at row `n / cols`, column
/// `n % cols`. Row 0 is the top row; column 0 is the left edge when the
/// surface is viewed from the front. Columns `0..cols/2` form the Eve
/// partition and `cols/2..cols` the Bob partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisGeometry {
    pub rows: usize,
    pub cols: usize,
    pub spacing: f64,
    pub center: Vec3,
    pub normal: Vec3,
}

impl RisGeometry {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::invalid("RIS needs at least one row and one column"));
        }
        if !self.cols.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "RIS column count must be even to split into halves, got {}",
                self.cols
            )));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::invalid(format!("element spacing must be positive, got {}", self.spacing)));
        }
        if !self.center.is_finite() {
            return Err(Error::invalid("RIS center must be finite"));
        }
        if self.normal.normalized().is_none() || !self.normal.is_finite() {
            return Err(Error::invalid("RIS normal must be a finite non-zero vector"));
        }
        Ok(())
    }

    pub fn mount(&self) -> Result<Mount> {
        Mount::facing(self.normal)
    }

    /// Column index of element `n`.
    pub fn column(&self, n: usize) -> usize {
        n % self.cols
    }

    pub fn is_bob_element(&self, n: usize) -> bool {
        self.column(n) >= self.cols / 2
    }

    /// Element positions in canonical (row-major) order.
    pub fn element_positions(&self) -> Result<Vec<Vec3>> {
        self.validate()?;
        let m = self.mount()?;
        let (rc, cc) = ((self.rows as f64 - 1.0) / 2.0, (self.cols as f64 - 1.0) / 2.0);
        let mut out = Vec::with_capacity(self.len());
        for r in 0..self.rows {
            for c in 0..self.cols {
                let along = (c as f64 - cc) * self.spacing;
                let down = (rc - r as f64) * self.spacing;
                out.push(self.center + m.horizontal * along + m.up * down);
            }
        }
        Ok(out)
    }
}

/// Complete physical description of one link scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub fc_hz: f64,
    /// Carried through to outputs only; capacities are per unit bandwidth.
    pub fs_hz: f64,
    pub pt_dbm: f64,
    pub noise_bob_dbm: f64,
    pub noise_eve_dbm: f64,
    pub cs_tx: Vec3,
    pub an_tx: Vec3,
    pub bob: Vec3,
    pub eve: Vec3,
    pub ris: RisGeometry,
    pub tx_pattern: AntennaPattern,
    pub ris_element_pattern: AntennaPattern,
}

impl ScenarioConfig {
    /// The reference indoor scenario: 3.75 GHz, 16×16 RIS at 4.1 cm pitch,
    /// −9 dBm transmit power, −90 dBm receiver noise.
    pub fn reference() -> Self {
        ScenarioConfig {
            fc_hz: 3.75e9,
            fs_hz: 0.5e6,
            pt_dbm: -9.0,
            noise_bob_dbm: -90.0,
            noise_eve_dbm: -90.0,
            cs_tx: Vec3::new(0.74, 0.31, 0.0),
            an_tx: Vec3::new(0.74, -0.31, 0.0),
            bob: Vec3::new(1.19, 1.41, 0.0),
            eve: Vec3::new(1.19, -1.41, 0.0),
            ris: RisGeometry {
                rows: 16,
                cols: 16,
                spacing: 0.041,
                center: Vec3::new(0.0, 0.0, 0.4),
                normal: Vec3::X,
            },
            tx_pattern: AntennaPattern::cosine(13.0),
            ris_element_pattern: AntennaPattern::cosine(0.0),
        }
    }

    pub fn with_pt_dbm(&self, pt_dbm: f64) -> Self {
        ScenarioConfig { pt_dbm, ..self.clone() }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.fc_hz
    }

    pub fn n_elements(&self) -> usize {
        self.ris.len()
    }

    pub fn pt_watts(&self) -> f64 {
        dbm_to_watts(self.pt_dbm)
    }

    pub fn noise_bob_watts(&self) -> f64 {
        dbm_to_watts(self.noise_bob_dbm)
    }

    pub fn noise_eve_watts(&self) -> f64 {
        dbm_to_watts(self.noise_eve_dbm)
    }

    /// Transmit aperture frame: boresight from `tx` toward the RIS center.
    pub fn tx_mount(&self, tx: Vec3) -> Result<Mount> {
        Mount::facing(self.ris.center - tx)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fc_hz > 0.0) || !self.fc_hz.is_finite() {
            return Err(Error::invalid(format!("fc must be positive, got {}", self.fc_hz)));
        }
        for (name, v) in [
            ("fs_hz", self.fs_hz),
            ("pt_dbm", self.pt_dbm),
            ("noise_bob_dbm", self.noise_bob_dbm),
            ("noise_eve_dbm", self.noise_eve_dbm),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite")));
            }
        }
        self.ris.validate()?;
        self.tx_pattern.validate()?;
        self.ris_element_pattern.validate()?;
        let elements = self.ris.element_positions()?;
        for (name, p) in self.nodes() {
            if !p.is_finite() {
                return Err(Error::invalid(format!("{name} position must be finite")));
            }
            if elements.iter().any(|e| distance(*e, p) == 0.0) {
                return Err(Error::DegenerateGeometry(format!("{name} coincides with a RIS element")));
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> [(&'static str, Vec3); 4] {
        [("cs_tx", self.cs_tx), ("an_tx", self.an_tx), ("bob", self.bob), ("eve", self.eve)]
    }

    /// The scenario reflected across y = 0 with the roles of the two
    /// transmitters and of the two receivers swapped.
    pub fn mirrored(&self) -> Self {
        ScenarioConfig {
            cs_tx: self.an_tx.mirror_y(),
            an_tx: self.cs_tx.mirror_y(),
            bob: self.eve.mirror_y(),
            eve: self.bob.mirror_y(),
            ris: RisGeometry {
                center: self.ris.center.mirror_y(),
                normal: self.ris.normal.mirror_y(),
                ..self.ris
            },
            ..self.clone()
        }
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::reference()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Vec3::default(), Vec3::default()), 0.0);
        assert_eq!(distance(Vec3::default(), Vec3::new(3.0, 4.0, 0.0)), 5.0);
        let sc = ScenarioConfig::reference();
        let d = distance(sc.cs_tx, sc.ris.center);
        assert_relative_eq!(d, (0.74f64.powi(2) + 0.31f64.powi(2) + 0.4f64.powi(2)).sqrt());
        assert!((d - 0.8965).abs() < 1e-4);
    }

    #[test]
    fn two_element_lattice() {
        let g = RisGeometry {
            rows: 1,
            cols: 2,
            spacing: 0.041,
            center: Vec3::default(),
            normal: Vec3::X,
        };
        let p = g.element_positions().unwrap();
        assert_relative_eq!(p[0].x, 0.0);
        assert_relative_eq!(p[0].y, -0.0205);
        assert_relative_eq!(p[1].y, 0.0205);
        assert_relative_eq!(p[0].z, 0.0);
        assert!(!g.is_bob_element(0));
        assert!(g.is_bob_element(1));
    }

    #[test]
    fn reference_lattice_extent_and_distinctness() {
        let g = ScenarioConfig::reference().ris;
        let p = g.element_positions().unwrap();
        assert_eq!(p.len(), 256);
        let (ymin, ymax) = p.iter().fold((f64::MAX, f64::MIN), |(a, b), q| (a.min(q.y), b.max(q.y)));
        let (zmin, zmax) = p.iter().fold((f64::MAX, f64::MIN), |(a, b), q| (a.min(q.z), b.max(q.z)));
        assert_relative_eq!(ymax - ymin, 15.0 * 0.041, epsilon = 1e-12);
        assert_relative_eq!(zmax - zmin, 15.0 * 0.041, epsilon = 1e-12);
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                assert!(distance(p[i], p[j]) > 0.04);
            }
        }
        // row-major with row 0 on top
        assert!(p[0].z > p[16].z);
        assert!(p[0].y < p[1].y);
    }

    #[test]
    fn lattice_rejects_odd_columns() {
        let g = RisGeometry { rows: 2, cols: 3, spacing: 0.01, center: Vec3::default(), normal: Vec3::X };
        assert!(g.element_positions().is_err());
    }

    #[test]
    fn pattern_examples() {
        let p = AntennaPattern::cosine(0.0);
        assert_relative_eq!(pattern_gain(&p, Vec3::X), 1.0);
        assert_eq!(pattern_gain(&p, Vec3::Y), 0.0);
        assert_eq!(pattern_gain(&p, Vec3::Z), 0.0);
        assert_eq!(pattern_gain(&p, Vec3::new(-1.0, 0.2, 0.0)), 0.0);
        let az60 = Vec3::new(60f64.to_radians().cos(), 60f64.to_radians().sin(), 0.0);
        assert_relative_eq!(pattern_gain(&p, az60), 0.25, epsilon = 1e-12);
        let horn = AntennaPattern::cosine(13.0);
        assert_relative_eq!(pattern_gain(&horn, Vec3::X), 10f64.powf(1.3), max_relative = 1e-12);
        let iso = AntennaPattern::isotropic(0.0);
        assert_eq!(pattern_gain(&iso, Vec3::new(-1.0, 0.0, 0.0)), 1.0);
    }

    #[test]
    fn fspl_examples() {
        let a = fspl(1.0, 3.75e9).unwrap();
        assert!((linear_to_db(a) + 43.93).abs() < 0.01, "{}", linear_to_db(a));
        let b = fspl(2.0, 3.75e9).unwrap();
        assert!((linear_to_db(b / a) + 6.0206).abs() < 1e-3);
        assert!(matches!(fspl(0.0, 3.75e9), Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn mount_maps_boresight_to_local_x() {
        let m = Mount::facing(Vec3::new(-0.74, -0.31, 0.4)).unwrap();
        let l = m.to_local(Vec3::new(-0.74, -0.31, 0.4));
        assert!(l.x > 0.0);
        assert!(l.y.abs() < 1e-12 && l.z.abs() < 1e-12);
        let ris = Mount::facing(Vec3::X).unwrap();
        assert_relative_eq!(ris.horizontal.y, 1.0);
        assert_relative_eq!(ris.up.z, 1.0);
    }

    #[test]
    fn reference_scenario_is_valid() {
        ScenarioConfig::reference().validate().unwrap();
        let mut sc = ScenarioConfig::reference();
        sc.bob = sc.ris.element_positions().unwrap()[5];
        assert!(sc.validate().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn centroid_is_center(rows in 1usize..12, half in 1usize..8, d in 0.001f64..0.2,
                                  cx in -5.0f64..5.0, cy in -5.0f64..5.0, cz in -5.0f64..5.0,
                                  nx in 0.1f64..1.0, ny in -1.0f64..1.0, nz in -1.0f64..1.0) {
                let g = RisGeometry { rows, cols: 2 * half, spacing: d, center: Vec3::new(cx, cy, cz), normal: Vec3::new(nx, ny, nz) };
                let p = g.element_positions().unwrap();
                let n = p.len() as f64;
                let c = p.iter().fold(Vec3::default(), |a, q| a + *q) * (1.0 / n);
                prop_assert!(distance(c, g.center) < 1e-12);
                let normal = g.normal.normalized().unwrap();
                for q in &p {
                    prop_assert!((*q - g.center).dot(normal).abs() < 1e-12);
                }
            }

            #[test]
            fn fspl_inverse_square(d1 in 1e-3f64..1e3, d2 in 1e-3f64..1e3, fc in 1e8f64..1e11) {
                let a = fspl(d1, fc).unwrap() * d1 * d1;
                let b = fspl(d2, fc).unwrap() * d2 * d2;
                prop_assert!(((a - b) / a).abs() < 1e-12);
            }

            #[test]
            fn cosine_gain_bounded(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0,
                                   ea in 0.0f64..4.0, ee in 0.0f64..4.0) {
                let p = AntennaPattern { kind: PatternKind::Cosine, azimuth_exponent: ea, elevation_exponent: ee, boresight_gain_dbi: 0.0 };
                let g = pattern_gain(&p, Vec3::new(x, y, z));
                prop_assert!((0.0..=1.0 + 1e-12).contains(&g));
                if x <= 0.0 { prop_assert_eq!(g, 0.0); }
            }
        }
    }
}
