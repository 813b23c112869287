use std::collections::BTreeMap;
use std::path::Path;

use super::sweep::{SweepMode, SweepSpec};
use crate::error::{Error, Result};

/// Flat `key = value` settings; keys use the CLI flag names, with `-` and `_`
/// interchangeable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim()
        .trim_start_matches("--")
        .replace('-', "_")
        .to_ascii_lowercase()
}

/// Parse `key = value` lines. `#` starts a comment; blank lines are ignored.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::InvalidInput(format!(
                "config line {}: expected key = value",
                i + 1
            )));
        };
        let key = normalize(k);
        if key.is_empty() {
            return Err(Error::InvalidInput(format!(
                "config line {}: empty key",
                i + 1
            )));
        }
        if entries.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Error::InvalidInput(format!(
                "config line {}: duplicate key {key}",
                i + 1
            )));
        }
    }
    Ok(Config { entries })
}

pub fn load_config(path: &Path) -> Result<Config> {
    parse_config(&std::fs::read_to_string(path)?)
}

impl Config {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize(key)).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(normalize(key), value.into());
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::InvalidInput(format!("config key {key}: {e}")))
            })
            .transpose()
    }

    pub fn grid(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key).map(parse_grid).transpose()
    }
}

/// A comma-separated list (`0.5,1,2`) or an inclusive range `start:stop:step`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::InvalidInput(format!("grid {text:?}: {what}"));
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(&format!("cannot parse {s:?}")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [single] => single.split(',').map(number).collect::<Result<Vec<_>>>()?,
        [start, stop, step] => {
            let (a, b, h) = (number(start)?, number(stop)?, number(step)?);
            if !(h > 0.0 && h.is_finite() && a.is_finite() && b.is_finite()) || b < a {
                return Err(bad("need start <= stop and a positive step"));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize + 1;
            if n > 10_000_000 {
                return Err(bad("too many points"));
            }
            // computed from the index, not accumulated, so endpoints stay exact
            (0..n).map(|i| a + h * i as f64).collect()
        }
        _ => return Err(bad("use a,b,c or start:stop:step")),
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    Ok(values)
}

/// Phase diagram around the critical curve: alpha in `[0.25, 3]`, sigma in `[0.1, 3]`, `b = 2`.
pub fn phase_diagram_spec() -> SweepSpec {
    let alpha = parse_grid("0.25:3:0.05").expect("static grid");
    let sigma = parse_grid("0.1:3:0.025").expect("static grid");
    SweepSpec::new(alpha, vec![2.0], sigma, SweepMode::Analytic)
}

/// Fixed-alpha panel: `alpha = 1`, sigma in `[0.1, 3]`, for the given shear.
pub fn sigma_scan_spec(b: f64) -> SweepSpec {
    let sigma = parse_grid("0.1:3:0.1").expect("static grid");
    SweepSpec::new(vec![1.0], vec![b], sigma, SweepMode::Analytic)
}
