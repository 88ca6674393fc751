//! Run configuration: a flat UTF-8 key=value file, overridden by flags.
//! The effective configuration is hashed and the hash is embedded in every
//! output file, so artifacts are traceable to the settings that made them.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub k_range: (u32, u32),
    pub prime_list: Vec<u64>,
    pub grid_factor: usize,
    pub delta_circle: f64,
    pub root_tol_scale: f64,
    pub quadrature_tol: f64,
    pub calibration: PathBuf,
    pub seed: u64,
    pub threads: usize,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k_range: (1, 12),
            prime_list: vec![1009, 2003, 3001, 4001, 5003],
            grid_factor: 16,
            delta_circle: 1e-8,
            root_tol_scale: 1e-10,
            quadrature_tol: 1e-7,
            calibration: default_calibration_path(),
            seed: 1,
            threads: 0,
            out: PathBuf::from("out"),
        }
    }
}

pub fn default_calibration_path() -> PathBuf {
    // installed alongside the workspace; tests and the pilot write it here
    PathBuf::from(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../polylab/calibration/default.calib"
    ))
}

impl RunConfig {
    /// Parse a key=value file into a config, starting from defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected key=value, got {raw:?}", lineno + 1);
            };
            cfg.apply(key.trim(), value.trim())
                .with_context(|| format!("config line {}", lineno + 1))?;
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "k_range" => {
                let (lo, hi) = parse_range(value)?;
                self.k_range = (lo, hi);
            }
            "prime_list" => {
                self.prime_list = value
                    .split(',')
                    .map(|s| s.trim().parse::<u64>().context("prime_list entry"))
                    .collect::<Result<_>>()?;
            }
            "grid_factor" => self.grid_factor = value.parse()?,
            "delta_circle" => self.delta_circle = value.parse()?,
            "root_tol" => self.root_tol_scale = value.parse()?,
            "quadrature_tol" => self.quadrature_tol = value.parse()?,
            "calibration" => self.calibration = PathBuf::from(value),
            "seed" => self.seed = value.parse()?,
            "threads" => self.threads = value.parse()?,
            "out" => self.out = PathBuf::from(value),
            other => bail!("unknown config key {other:?}"),
        }
        Ok(())
    }

    /// Canonical serialization of the effective configuration.
    pub fn canonical(&self) -> String {
        let mut map = BTreeMap::new();
        map.insert("k_range", format!("{}..{}", self.k_range.0, self.k_range.1));
        map.insert(
            "prime_list",
            self.prime_list
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        map.insert("grid_factor", self.grid_factor.to_string());
        map.insert("delta_circle", format!("{:e}", self.delta_circle));
        map.insert("root_tol", format!("{:e}", self.root_tol_scale));
        map.insert("quadrature_tol", format!("{:e}", self.quadrature_tol));
        map.insert("calibration", self.calibration.display().to_string());
        map.insert("seed", self.seed.to_string());
        map.insert("threads", self.threads.to_string());
        map.insert("out", self.out.display().to_string());
        let mut out = String::new();
        for (k, v) in map {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    /// Short hex digest of the effective configuration.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn parse_range(value: &str) -> Result<(u32, u32)> {
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: u32 = lo.trim().parse().context("range start")?;
        let hi: u32 = hi.trim().trim_start_matches('=').parse().context("range end")?;
        if hi < lo {
            bail!("empty range {value:?}");
        }
        Ok((lo, hi))
    } else {
        let k: u32 = value.trim().parse().context("range value")?;
        Ok((k, k))
    }
}
