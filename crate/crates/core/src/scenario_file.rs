//! Flat `key = value` scenario files.
//!
//! Every key must appear exactly once; unknown keys are rejected. Position
//! values are `x, y, z` triples in meters. The RIS always faces +x and the
//! RIS elements use the same pattern kind as the transmit antennas with a
//! 0 dBi boresight gain.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scene::{AntennaPattern, PatternKind, RisGeometry, ScenarioConfig, Vec3};

pub const KEYS: [&str; 15] = [
    "fc_hz",
    "fs_hz",
    "pt_dbm",
    "noise_bob_dbm",
    "noise_eve_dbm",
    "cs_tx",
    "an_tx",
    "bob",
    "eve",
    "ris_rows",
    "ris_cols",
    "ris_spacing_m",
    "ris_center",
    "tx_gain_dbi",
    "pattern_kind",
];

pub fn parse(text: &str) -> Result<ScenarioConfig> {
    let mut values: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("expected `key = value`, got {line:?}"),
        })?;
        let key = key.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(Error::Parse { line: line_no, msg: format!("unknown key {key:?}") });
        };
        if values.insert(known, (line_no, value.trim())).is_some() {
            return Err(Error::Parse { line: line_no, msg: format!("duplicate key {key:?}") });
        }
    }
    if let Some(missing) = KEYS.iter().find(|k| !values.contains_key(*k)) {
        return Err(Error::Parse { line: 0, msg: format!("missing key {missing:?}") });
    }

    let get = |k: &str| values[k];
    let real = |k: &str| -> Result<f64> {
        let (line, v) = get(k);
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Parse { line, msg: format!("{k}: expected a finite number, got {v:?}") })
    };
    let count = |k: &str| -> Result<usize> {
        let (line, v) = get(k);
        v.parse::<usize>()
            .map_err(|_| Error::Parse { line, msg: format!("{k}: expected a non-negative integer, got {v:?}") })
    };
    let point = |k: &str| -> Result<Vec3> {
        let (line, v) = get(k);
        let parts: Vec<f64> = v
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse { line, msg: format!("{k}: expected x,y,z, got {v:?}") })?;
        match parts.as_slice() {
            [x, y, z] if x.is_finite() && y.is_finite() && z.is_finite() => Ok(Vec3::new(*x, *y, *z)),
            _ => Err(Error::Parse { line, msg: format!("{k}: expected three finite coordinates, got {v:?}") }),
        }
    };
    let kind: PatternKind = {
        let (line, v) = get("pattern_kind");
        v.parse().map_err(|e: Error| Error::Parse { line, msg: e.to_string() })?
    };

    let sc = ScenarioConfig {
        fc_hz: real("fc_hz")?,
        fs_hz: real("fs_hz")?,
        pt_dbm: real("pt_dbm")?,
        noise_bob_dbm: real("noise_bob_dbm")?,
        noise_eve_dbm: real("noise_eve_dbm")?,
        cs_tx: point("cs_tx")?,
        an_tx: point("an_tx")?,
        bob: point("bob")?,
        eve: point("eve")?,
        ris: RisGeometry {
            rows: count("ris_rows")?,
            cols: count("ris_cols")?,
            spacing: real("ris_spacing_m")?,
            center: point("ris_center")?,
            normal: Vec3::X,
        },
        tx_pattern: AntennaPattern::cosine(real("tx_gain_dbi")?).with_kind(kind),
        ris_element_pattern: AntennaPattern::cosine(0.0).with_kind(kind),
    };
    sc.validate()?;
    Ok(sc)
}

/// Serializes the fields representable in the file format. Round-trips
/// through [`parse`] for any scenario built from a file.
pub fn to_string(sc: &ScenarioConfig) -> String {
    let p = |v: Vec3| format!("{}, {}, {}", v.x, v.y, v.z);
    let mut s = String::new();
    let _ = writeln!(s, "fc_hz = {}", sc.fc_hz);
    let _ = writeln!(s, "fs_hz = {}", sc.fs_hz);
    let _ = writeln!(s, "pt_dbm = {}", sc.pt_dbm);
    let _ = writeln!(s, "noise_bob_dbm = {}", sc.noise_bob_dbm);
    let _ = writeln!(s, "noise_eve_dbm = {}", sc.noise_eve_dbm);
    let _ = writeln!(s, "cs_tx = {}", p(sc.cs_tx));
    let _ = writeln!(s, "an_tx = {}", p(sc.an_tx));
    let _ = writeln!(s, "bob = {}", p(sc.bob));
    let _ = writeln!(s, "eve = {}", p(sc.eve));
    let _ = writeln!(s, "ris_rows = {}", sc.ris.rows);
    let _ = writeln!(s, "ris_cols = {}", sc.ris.cols);
    let _ = writeln!(s, "ris_spacing_m = {}", sc.ris.spacing);
    let _ = writeln!(s, "ris_center = {}", p(sc.ris.center));
    let _ = writeln!(s, "tx_gain_dbi = {}", sc.tx_pattern.boresight_gain_dbi);
    let _ = writeln!(s, "pattern_kind = {}", sc.tx_pattern.kind.as_str());
    s
}
