//! Autocorrelation-coefficient profiles of the Rudin-Shapiro polynomials and
//! growth-exponent estimation for max_{1<=j<=n-1} |a_j|.

use crate::error::{Error, Result};
use crate::eval::autocorr_int;
use crate::poly::{rudin_shapiro_with_cap, DEFAULT_K_MAX};

/// Per-generation summary of the autocorrelation sequence of P_k. All
/// quantities are exact integers.
#[derive(Clone, Copy, Debug)]
pub struct AutocorrProfile {
    pub k: u32,
    pub n: usize,
    /// max_{1<=j<=n-1} |a_j| (a_0 = n excluded).
    pub max_abs: i64,
    /// Smallest index attaining max_abs.
    pub argmax_j: usize,
    /// sum_{j>=1} a_j^2.
    pub l2: i64,
}

/// Profile of generation k, computed from the FFT autocorrelation of P_k.
pub fn autocorr_profile(k: u32) -> Result<AutocorrProfile> {
    if k > DEFAULT_K_MAX {
        return Err(Error::Capacity {
            what: "autocorrelation generation k",
            requested: k as usize,
            max: DEFAULT_K_MAX as usize,
        });
    }
    let pair = rudin_shapiro_with_cap(k, DEFAULT_K_MAX)?;
    let a = autocorr_int(&pair.p)?;
    profile_from_sequence(k, &a)
}

fn profile_from_sequence(k: u32, a: &[i64]) -> Result<AutocorrProfile> {
    let n = a.len();
    let mut max_abs = 0i64;
    let mut argmax_j = 0usize;
    let mut l2 = 0i64;
    for (j, &aj) in a.iter().enumerate().skip(1) {
        l2 += aj * aj;
        if aj.abs() > max_abs {
            max_abs = aj.abs();
            argmax_j = j;
        }
    }
    Ok(AutocorrProfile {
        k,
        n,
        max_abs,
        argmax_j,
        l2,
    })
}

/// Unweighted least-squares fit of log y against log x.
#[derive(Clone, Copy, Debug)]
pub struct GrowthFit {
    pub slope: f64,
    /// Two standard errors of the slope.
    pub half_width: f64,
    pub residual_rms: f64,
}

/// Fit a power law y ~ C x^slope through (x, y) points, both positive.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<GrowthFit> {
    if points.len() < 2 {
        return Err(Error::Domain(format!(
            "power-law fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::Domain("power-law fit needs positive data".into()));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(x, _)| x.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("power-law fit abscissae are constant".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let dof = (points.len().max(3) - 2) as f64;
    let stderr = (ssr / dof / sxx).sqrt();
    Ok(GrowthFit {
        slope,
        half_width: 2.0 * stderr,
        residual_rms: (ssr / n).sqrt(),
    })
}

/// Least-squares slope of log(max|a_j|) against log n over an inclusive
/// generation range.
pub fn growth_exponent(k_lo: u32, k_hi: u32) -> Result<GrowthFit> {
    if k_hi < k_lo || (k_hi - k_lo + 1) < 5 {
        return Err(Error::Domain(format!(
            "growth exponent range {k_lo}..={k_hi} is degenerate (need length >= 5)"
        )));
    }
    let mut points = Vec::new();
    for k in k_lo..=k_hi {
        let profile = autocorr_profile(k)?;
        if profile.max_abs > 0 {
            points.push((profile.n as f64, profile.max_abs as f64));
        }
    }
    fit_log_log(&points)
}
