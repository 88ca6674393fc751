//! Pilot-frozen constants. The inequalities under audit come with
//! nonconstructive constants; a pilot run measures them once, freezes them
//! here, and every later run regresses against the frozen values.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Flat key = value store, one constant per line, `#` comments.
#[derive(Clone, Debug, Default)]
pub struct Calibration {
    values: BTreeMap<String, f64>,
}

impl Calibration {
    pub fn new() -> Self {
        Calibration::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Domain(format!("calibration line {} has no '=': {raw}", lineno + 1))
            })?;
            let parsed: f64 = value.trim().parse().map_err(|_| {
                Error::Domain(format!(
                    "calibration line {} has a non-numeric value: {raw}",
                    lineno + 1
                ))
            })?;
            values.insert(key.trim().to_string(), parsed);
        }
        Ok(Calibration { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::from("# pilot-frozen audit constants\n");
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {v}\n"));
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    pub fn require(&self, key: &str) -> Result<f64> {
        self.get(key)
            .ok_or_else(|| Error::Domain(format!("calibration key missing: {key}")))
    }

    pub fn set(&mut self, key: &str, value: f64) {
        self.values.insert(key.to_string(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.values.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let text = "# header\nannulus_c1 = 2\nnearest_zero_c4 = 1.25e-1\n";
        let c = Calibration::parse(text).unwrap();
        assert_eq!(c.get("annulus_c1"), Some(2.0));
        assert_eq!(c.get("nearest_zero_c4"), Some(0.125));
        assert!(c.get("missing").is_none());
        assert!(c.require("missing").is_err());
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(Calibration::parse("just words\n").is_err());
        assert!(Calibration::parse("key = not_a_number\n").is_err());
    }
}
