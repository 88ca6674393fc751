//! Value-distribution statistics: empirical CDF discrepancy of the
//! normalized squared modulus against the uniform law, cell discrepancy of
//! the normalized values against planar area measure on the unit disk, and
//! seeded Monte-Carlo estimates of the Littlewood-ensemble norm limits.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{eval_grid, GridSamples};
use crate::norms::{mahler_jensen, mq_norm, QTag};
use crate::num::KahanSum;
use crate::poly::{rudin_shapiro, SignedPoly};
use crate::zeros::find_roots;

pub const ALPHA_BINS: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyFamily {
    SaffariCdf,
    MontgomeryCells,
}

/// Sup deviation of an empirical distribution from its conjectured limit.
#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub k: u32,
    pub n_grid: usize,
    pub family: DiscrepancyFamily,
    /// max over the test sets of |empirical - limit|, worst of P and Q.
    pub sup_dev: f64,
    pub sup_dev_p: f64,
    pub sup_dev_q: f64,
    /// Description of the test-set family.
    pub cells: String,
}

/// Empirical CDF of |P_k(e^{it})|^2 / 2^{k+1} over the grid, compared with
/// the uniform CDF on a fixed 1024-point alpha grid (grid error <= 1/1024).
/// Computed for both pair members; the report carries the max.
pub fn saffari_discrepancy(k: u32, n_grid: usize) -> Result<DiscrepancyReport> {
    let required = 16usize << k;
    if n_grid < required {
        return Err(Error::GridTooSmall {
            n_grid,
            required,
        });
    }
    let pair = rudin_shapiro(k)?;
    let dev_p = cdf_sup_dev(&pair.p, pair.n, n_grid)?;
    let dev_q = cdf_sup_dev(&pair.q, pair.n, n_grid)?;
    Ok(DiscrepancyReport {
        k,
        n_grid,
        family: DiscrepancyFamily::SaffariCdf,
        sup_dev: dev_p.max(dev_q),
        sup_dev_p: dev_p,
        sup_dev_q: dev_q,
        cells: format!("alpha-grid:{ALPHA_BINS}"),
    })
}

fn cdf_sup_dev(f: &SignedPoly, n: usize, n_grid: usize) -> Result<f64> {
    let samples: GridSamples<f64> = eval_grid(f, n_grid)?;
    let scale = 1.0 / (2.0 * n as f64);
    let mut counts = vec![0u64; ALPHA_BINS];
    for v in &samples.values {
        let u = v.norm_sqr() * scale;
        let bin = ((u * ALPHA_BINS as f64) as usize).min(ALPHA_BINS - 1);
        counts[bin] += 1;
    }
    let mut cum = 0u64;
    let mut sup = 0.0f64;
    for (i, &c) in counts.iter().enumerate() {
        cum += c;
        let alpha = (i + 1) as f64 / ALPHA_BINS as f64;
        let empirical = cum as f64 / n_grid as f64;
        sup = sup.max((empirical - alpha).abs());
    }
    Ok(sup)
}

/// Closed-form CDF of the k=1 normalized squared modulus: the arcsine law
/// F(alpha) = (2/pi) asin(sqrt(alpha)). Kept as the independent anchor the
/// k=1 discrepancy is checked against.
pub fn arcsine_cdf(alpha: f64) -> f64 {
    (2.0 / std::f64::consts::PI) * alpha.sqrt().asin()
}

/// Sup over the alpha grid of |arcsine CDF - uniform|: the exact k=1 limit
/// of the Saffari discrepancy statistic.
pub fn arcsine_sup_dev() -> f64 {
    let mut sup = 0.0f64;
    for i in 0..ALPHA_BINS {
        let alpha = (i + 1) as f64 / ALPHA_BINS as f64;
        sup = sup.max((arcsine_cdf(alpha) - alpha).abs());
    }
    sup
}

/// Per-cell detail of a Montgomery cell count, for JSON serialization and
/// the radial-marginal consistency check.
#[derive(Clone, Debug, Serialize)]
pub struct MontgomeryDetail {
    pub n_radial: usize,
    pub n_angular: usize,
    pub n_grid: usize,
    /// Row-major counts (radial ring, then angular sector), for P then Q.
    pub counts_p: Vec<u64>,
    pub counts_q: Vec<u64>,
}

impl MontgomeryDetail {
    /// Cumulative radial fractions for P: the fraction of samples with
    /// |value|^2 <= i / n_radial, i = 1..=n_radial. Equal-area rings make
    /// this directly comparable to the normalized-CDF statistic.
    pub fn radial_cumulative_p(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_radial);
        let mut cum = 0u64;
        for ring in 0..self.n_radial {
            for sector in 0..self.n_angular {
                cum += self.counts_p[ring * self.n_angular + sector];
            }
            out.push(cum as f64 / self.n_grid as f64);
        }
        out
    }
}

/// Cell discrepancy of P_k(e^{it}) / sqrt(2^{k+1}) against twice-normalized
/// area measure, over a polar grid of equal-area cells: ring boundaries
/// r_i = sqrt(i / n_radial), uniform sectors. Every cell has limit measure
/// 1 / (n_radial * n_angular).
pub fn montgomery_discrepancy(
    k: u32,
    n_grid: usize,
    n_radial: usize,
    n_angular: usize,
) -> Result<(DiscrepancyReport, MontgomeryDetail)> {
    let required = 16usize << k;
    if n_grid < required {
        return Err(Error::GridTooSmall {
            n_grid,
            required,
        });
    }
    if n_radial == 0 || n_angular == 0 || n_radial > 64 || n_angular > 64 {
        return Err(Error::Domain(format!(
            "cell grid {n_radial}x{n_angular} outside 1..=64 per axis"
        )));
    }
    let pair = rudin_shapiro(k)?;
    let counts_p = cell_counts(&pair.p, pair.n, n_grid, n_radial, n_angular)?;
    let counts_q = cell_counts(&pair.q, pair.n, n_grid, n_radial, n_angular)?;
    let limit = 1.0 / (n_radial * n_angular) as f64;
    let sup = |counts: &[u64]| {
        counts
            .iter()
            .map(|&c| (c as f64 / n_grid as f64 - limit).abs())
            .fold(0.0f64, f64::max)
    };
    let dev_p = sup(&counts_p);
    let dev_q = sup(&counts_q);
    let report = DiscrepancyReport {
        k,
        n_grid,
        family: DiscrepancyFamily::MontgomeryCells,
        sup_dev: dev_p.max(dev_q),
        sup_dev_p: dev_p,
        sup_dev_q: dev_q,
        cells: format!("polar-equal-area:{n_radial}x{n_angular}"),
    };
    let detail = MontgomeryDetail {
        n_radial,
        n_angular,
        n_grid,
        counts_p,
        counts_q,
    };
    Ok((report, detail))
}

fn cell_counts(
    f: &SignedPoly,
    n: usize,
    n_grid: usize,
    n_radial: usize,
    n_angular: usize,
) -> Result<Vec<u64>> {
    let samples: GridSamples<f64> = eval_grid(f, n_grid)?;
    let inv_two_n = 1.0 / (2.0 * n as f64);
    let mut counts = vec![0u64; n_radial * n_angular];
    let tau = std::f64::consts::TAU;
    for v in &samples.values {
        let r_sq = v.norm_sqr() * inv_two_n; // in [0, 1]
        let ring = ((r_sq * n_radial as f64) as usize).min(n_radial - 1);
        let angle = v.arg().rem_euclid(tau) / tau; // in [0, 1)
        let sector = ((angle * n_angular as f64) as usize).min(n_angular - 1);
        counts[ring * n_angular + sector] += 1;
    }
    Ok(counts)
}

/// Which ensemble statistic is averaged per sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleStat {
    /// M_q(f)^q / n^{q/2} with q > 0, by exact-degree grid quadrature.
    NormPower { q: f64 },
    /// M_0(f) / n^{1/2}, through the Jensen product over the full root set.
    MahlerRatio,
}

impl EnsembleStat {
    pub fn label(&self) -> String {
        match self {
            EnsembleStat::NormPower { q } => format!("{q}"),
            EnsembleStat::MahlerRatio => "mahler".into(),
        }
    }
}

/// Monte-Carlo mean over uniform random sign vectors. The RNG is a named
/// counter-based generator (ChaCha8); sample i draws from stream i of the
/// given seed, so the estimate is reproducible and thread-count invariant.
#[derive(Clone, Debug, Serialize)]
pub struct EnsembleEstimate {
    pub n: usize,
    pub stat: EnsembleStat,
    pub samples: usize,
    pub mean: f64,
    pub std_err: f64,
    pub seed: u64,
    pub rng: &'static str,
}

pub fn ensemble_mean(
    n: usize,
    stat: EnsembleStat,
    samples: usize,
    seed: u64,
) -> Result<EnsembleEstimate> {
    if samples < 100 {
        return Err(Error::Domain(format!(
            "ensemble mean needs at least 100 samples, got {samples}"
        )));
    }
    if n < 2 {
        return Err(Error::Domain("ensemble degree+1 must be at least 2".into()));
    }
    if let EnsembleStat::NormPower { q } = stat {
        if q <= 0.0 {
            return Err(Error::Domain("ensemble exponent q must be positive".into()));
        }
    }
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let f = random_littlewood(n, seed, i as u64);
            sample_value(&f, n, stat)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut acc = KahanSum::new();
    for &v in &values {
        acc.add(v);
    }
    let mean = acc.value() / samples as f64;
    let mut var_acc = KahanSum::new();
    for &v in &values {
        var_acc.add((v - mean) * (v - mean));
    }
    let std = (var_acc.value() / (samples as f64 - 1.0)).sqrt();
    Ok(EnsembleEstimate {
        n,
        stat,
        samples,
        mean,
        std_err: std / (samples as f64).sqrt(),
        seed,
        rng: "chacha8",
    })
}

fn random_littlewood(n: usize, seed: u64, stream: u64) -> SignedPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let coeffs: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    SignedPoly::new(coeffs).expect("sign vectors are valid polynomials")
}

fn sample_value(f: &SignedPoly, n: usize, stat: EnsembleStat) -> Result<f64> {
    match stat {
        EnsembleStat::NormPower { q } => {
            let n_grid = (4 * n).next_power_of_two();
            let r = mq_norm::<f64>(f, QTag::Finite(q), n_grid)?;
            Ok(r.value.powf(q) / (n as f64).powf(q / 2.0))
        }
        EnsembleStat::MahlerRatio => {
            let roots = find_roots::<f64>(f, None)?;
            let leading = Complex::new(*f.coeffs().last().unwrap() as f64, 0.0);
            let r = mahler_jensen(&roots, leading)?;
            Ok(r.value / (n as f64).sqrt())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcsine_anchor_value() {
        // stationary point alpha(1 - alpha) = 1/pi^2; sup dev ~ 0.10526
        let sup = arcsine_sup_dev();
        assert!((sup - 0.105_256_8).abs() < 1e-4, "sup = {sup}");
    }

    #[test]
    fn saffari_small_k_matches_closed_form() {
        // at k=1 the empirical CDF converges to the arcsine law as the
        // grid refines
        let rep = saffari_discrepancy(1, 1 << 16).unwrap();
        assert!(
            (rep.sup_dev - arcsine_sup_dev()).abs() < 1e-3,
            "empirical {} vs closed form {}",
            rep.sup_dev,
            arcsine_sup_dev()
        );
    }

    #[test]
    fn saffari_endpoint_and_symmetry() {
        let rep = saffari_discrepancy(4, 16 << 4).unwrap();
        // P and Q share a value distribution on even grids
        assert!(
            (rep.sup_dev_p - rep.sup_dev_q).abs() < 1e-9,
            "P {} vs Q {}",
            rep.sup_dev_p,
            rep.sup_dev_q
        );
    }

    #[test]
    fn saffari_grid_guard() {
        assert!(saffari_discrepancy(4, 64).is_err());
    }

    #[test]
    fn montgomery_full_disk_normalization() {
        // one cell = the full disk: empirical fraction 1, limit 1
        let (rep, _) = montgomery_discrepancy(4, 16 << 4, 1, 1).unwrap();
        assert!(rep.sup_dev < 1e-12, "sup {}", rep.sup_dev);
    }

    #[test]
    fn montgomery_radial_marginal_matches_cdf() {
        let k = 8u32;
        let n_grid = 16usize << k;
        let (_, detail) = montgomery_discrepancy(k, n_grid, 16, 16).unwrap();
        let marginal = detail.radial_cumulative_p();
        // ring edges are alpha = i/16 of the normalized squared modulus;
        // compare against a 16-bin CDF computed directly
        let pair = rudin_shapiro(k).unwrap();
        let samples: GridSamples<f64> = eval_grid(&pair.p, n_grid).unwrap();
        for i in 1..=16usize {
            let alpha = i as f64 / 16.0;
            let direct = samples
                .values
                .iter()
                .filter(|v| v.norm_sqr() / (2.0 * pair.n as f64) < alpha)
                .count() as f64
                / n_grid as f64;
            assert!(
                (marginal[i - 1] - direct).abs() <= 1.0 / n_grid as f64 * 4.0,
                "ring {i}: marginal {} vs direct {direct}",
                marginal[i - 1]
            );
        }
    }

    #[test]
    fn ensemble_q2_is_parseval_exact() {
        let est = ensemble_mean(32, EnsembleStat::NormPower { q: 2.0 }, 200, 7).unwrap();
        assert!((est.mean - 1.0).abs() < 1e-12, "mean {}", est.mean);
        assert!(est.std_err < 1e-12);
    }

    #[test]
    fn ensemble_reproducible_and_stream_independent() {
        let a = ensemble_mean(16, EnsembleStat::NormPower { q: 4.0 }, 128, 99).unwrap();
        let b = ensemble_mean(16, EnsembleStat::NormPower { q: 4.0 }, 128, 99).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        let c = ensemble_mean(16, EnsembleStat::NormPower { q: 4.0 }, 128, 100).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn ensemble_guards() {
        assert!(ensemble_mean(16, EnsembleStat::NormPower { q: 4.0 }, 50, 1).is_err());
        assert!(ensemble_mean(16, EnsembleStat::NormPower { q: -1.0 }, 200, 1).is_err());
    }
}
