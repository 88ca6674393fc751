//! The audit battery: every inequality the laboratory checks, as functions
//! from (instance, config) to AuditReports. Shared by the `audit` and
//! `report` subcommands.

use anyhow::{bail, Result};
use polylab::autocorr::{autocorr_profile, growth_exponent};
use polylab::calibration::Calibration;
use polylab::distribution::{arcsine_sup_dev, ensemble_mean, saffari_discrepancy, EnsembleStat};
use polylab::eval::{eval_grid, modulus_squared, RsMember, RudinShapiroCurve};
use polylab::norms::{m2_exact, m4_ratio, mahler_jensen, mahler_quadrature, mq_norm, QTag};
use polylab::report::AuditReport;
use polylab::zeros::{
    bernstein_audit, classify, find_roots, level_crossings, nearest_zero_audit,
    root_of_unity_floor, sublevel_measure, unimodular_count_reciprocal,
};
use polylab::{fekete, rudin_shapiro, GridSamples64};

use crate::config::RunConfig;

/// gamma = sin^2(pi/8).
pub fn gamma() -> f64 {
    let s = (std::f64::consts::PI / 8.0).sin();
    s * s
}

/// Pointwise constancy of |P_k|^2 + |Q_k|^2 = 2^{k+1} on a grid.
pub fn audit_parallelogram(k: u32, grid_factor: usize) -> Result<AuditReport> {
    let pair = rudin_shapiro(k)?;
    let n_grid = (grid_factor.max(4) * pair.n).next_power_of_two();
    let gp: GridSamples64 = eval_grid(&pair.p, n_grid)?;
    let gq: GridSamples64 = eval_grid(&pair.q, n_grid)?;
    let target = 2.0 * pair.n as f64;
    let mut max_dev = 0.0f64;
    for (p, q) in gp.values.iter().zip(&gq.values) {
        max_dev = max_dev.max((p.norm_sqr() + q.norm_sqr() - target).abs());
    }
    Ok(AuditReport::from_bound(
        "eq11",
        "|P_k|^2 + |Q_k|^2 = 2^{k+1} on the unit circle",
        format!("k={k};grid={n_grid}"),
        max_dev,
        1e-6 * target,
    ))
}

/// Pointwise mirror identity |Q_k(-z)| = |P_k(z)| on even grids.
pub fn audit_mirror(k: u32, grid_factor: usize) -> Result<AuditReport> {
    let pair = rudin_shapiro(k)?;
    let n_grid = (grid_factor.max(4) * pair.n).next_power_of_two();
    let gp: GridSamples64 = eval_grid(&pair.p, n_grid)?;
    let gq: GridSamples64 = eval_grid(&pair.q, n_grid)?;
    let mut max_dev = 0.0f64;
    for m in 0..n_grid {
        let mirrored = (m + n_grid / 2) % n_grid;
        max_dev = max_dev.max((gq.values[mirrored].norm() - gp.values[m].norm()).abs());
    }
    Ok(AuditReport::from_bound(
        "mirror",
        "|Q_k(-z)| = |P_k(z)| on the unit circle",
        format!("k={k};grid={n_grid}"),
        max_dev,
        1e-8 * (pair.n as f64).sqrt(),
    ))
}

/// M_2(P_k) = 2^{k/2} through grid quadrature, to 1e-10 relative.
pub fn audit_parseval(k: u32, grid_factor: usize) -> Result<AuditReport> {
    let pair = rudin_shapiro(k)?;
    let n_grid = (grid_factor.max(4) * pair.n).next_power_of_two();
    let m2 = mq_norm::<f64>(&pair.p, QTag::Finite(2.0), n_grid)?;
    let exact = m2_exact::<f64>(&pair.p);
    let rel = (m2.value - exact.value).abs() / exact.value;
    Ok(AuditReport::from_bound(
        "parseval",
        "M_2(P_k) = 2^{k/2}",
        format!("k={k};grid={n_grid}"),
        rel,
        1e-10,
    ))
}

/// M_4(P_k)^4 approaches 4^{k+1}/3 geometrically: |ratio - 1| <= 2^{1-k}.
pub fn audit_m4(k: u32) -> Result<AuditReport> {
    let ratio = m4_ratio(k)?;
    Ok(AuditReport::from_bound(
        "m4",
        "M_4(P_k)^4 / (4^{k+1}/3) -> 1",
        format!("k={k};ratio={ratio}"),
        (ratio - 1.0).abs(),
        2f64.powi(1 - k as i32),
    ))
}

/// max|a_j| <= C n^0.8190 with the calibrated C.
pub fn audit_autocorr_bound(k: u32, calib: &Calibration) -> Result<AuditReport> {
    let c = calib
        .get("autocorr_c")
        .ok_or_else(|| anyhow::anyhow!("calibration key autocorr_c missing"))?;
    let profile = autocorr_profile(k)?;
    Ok(AuditReport::from_bound(
        "autocorr_bound",
        "max|a_j| <= C n^0.8190 with pilot-frozen C",
        format!("k={k};max_abs={};C={c}", profile.max_abs),
        profile.max_abs as f64,
        c * (profile.n as f64).powf(0.8190),
    ))
}

/// Fitted growth exponent of max|a_j| within the bracket [0.70, 0.85].
pub fn audit_autocorr_exponent(k_lo: u32, k_hi: u32) -> Result<Vec<AuditReport>> {
    let fit = growth_exponent(k_lo, k_hi)?;
    let params = format!(
        "k={k_lo}..{k_hi};slope={:.5};half_width={:.5}",
        fit.slope, fit.half_width
    );
    Ok(vec![
        AuditReport::from_bound(
            "autocorr_exponent_lower",
            "fitted growth exponent of max|a_j| >= 0.70",
            params.clone(),
            0.70,
            fit.slope,
        ),
        AuditReport::from_bound(
            "autocorr_exponent_upper",
            "fitted growth exponent of max|a_j| <= 0.85",
            params,
            fit.slope,
            0.85,
        ),
    ])
}

pub fn audit_rou_floor(k: u32) -> Result<AuditReport> {
    Ok(root_of_unity_floor(k)?)
}

/// Sublevel-measure inequality from the zero count, both normalization
/// readings reported.
pub fn audit_sublevel(k: u32, alpha: f64, cfg: &RunConfig) -> Result<Vec<AuditReport>> {
    let pair = rudin_shapiro(k)?;
    let roots = find_roots::<f64>(&pair.p, None)?;
    let cls = classify(&roots, pair.n, cfg.delta_circle, 2.0);
    let curve = RudinShapiroCurve::new(&pair, RsMember::P);
    let n_grid = (cfg.grid_factor.max(16) * pair.n).next_power_of_two();
    let measure = sublevel_measure(&curve, alpha, n_grid)?;
    let base = alpha.sqrt() / std::f64::consts::E * (cls.on_circle as f64 / pair.n as f64);
    let params = format!(
        "k={k};alpha={alpha};zeros_on_circle={};measure={measure:.6}",
        cls.on_circle
    );
    Ok(vec![
        AuditReport::from_bound(
            "sublevel_radians",
            "m{R <= alpha max R} >= sqrt(alpha)/e * (zeros/n), raw radians",
            params.clone(),
            base,
            measure,
        ),
        AuditReport::from_bound(
            "sublevel_scaled",
            "m{R <= alpha max R} >= 2pi sqrt(alpha)/e * (zeros/n)",
            params,
            base * std::f64::consts::TAU,
            measure,
        ),
    ])
}

/// Derivative-implies-nearby-zero audit at c = gamma/(2 pi), regressed
/// against the pilot-frozen c4.
pub fn audit_nearest_zero(k: u32, cfg: &RunConfig, calib: &Calibration) -> Result<AuditReport> {
    let c4 = calib
        .get("nearest_zero_c4")
        .ok_or_else(|| anyhow::anyhow!("calibration key nearest_zero_c4 missing"))?;
    let pair = rudin_shapiro(k)?;
    let r = modulus_squared::<f64>(&pair.p)?;
    let roots = find_roots::<f64>(&pair.p, None)?;
    let c = gamma() / std::f64::consts::TAU;
    let n_grid = (cfg.grid_factor.max(16) * pair.n).next_power_of_two();
    let audit = nearest_zero_audit(&r, c, &roots, pair.n, n_grid, c4)?;
    Ok(audit.report)
}

/// Bernstein-type bound on a sweep of high-derivative angles with
/// r = 1/(2n).
pub fn audit_bernstein(k: u32, cfg: &RunConfig) -> Result<Vec<AuditReport>> {
    let pair = rudin_shapiro(k)?;
    let s = modulus_squared::<f64>(&pair.p)?;
    let roots = find_roots::<f64>(&pair.p, None)?.inverted_union();
    let n_grid = (cfg.grid_factor.max(16) * pair.n).next_power_of_two();
    let deriv = s.derivative_grid_values(n_grid)?;
    // the eight grid angles with the largest |R'|
    let mut order: Vec<usize> = (0..n_grid).collect();
    order.sort_by(|&a, &b| deriv[b].abs().partial_cmp(&deriv[a].abs()).unwrap());
    let radius = 1.0 / (2.0 * pair.n as f64);
    let mut out = Vec::new();
    for &m in order.iter().take(8) {
        let a = std::f64::consts::TAU * m as f64 / n_grid as f64;
        out.push(bernstein_audit(&s, a, radius, &roots)?);
    }
    Ok(out)
}

/// Transversal crossing counts never exceed 2(n-1); distinct solutions at
/// low levels reach (1 - eps) eta n / 2.
pub fn audit_crossings(k: u32, etas: &[f64], cfg: &RunConfig) -> Result<Vec<AuditReport>> {
    let pair = rudin_shapiro(k)?;
    let curve = RudinShapiroCurve::new(&pair, RsMember::P);
    let n_grid = (cfg.grid_factor.max(16) * pair.n).next_power_of_two();
    let two_gamma = 2.0 * gamma();
    let mut out = Vec::new();
    for &eta in etas {
        let report = level_crossings(&curve, eta, pair.n, n_grid)?;
        out.push(AuditReport::from_bound(
            "crossing_cap",
            "R_k(t) = eta n has at most 2(n-1) transversal solutions",
            format!("k={k};eta={eta};count={}", report.count()),
            report.count() as f64,
            2.0 * (pair.n as f64 - 1.0),
        ));
        if eta < two_gamma {
            out.push(AuditReport::from_bound(
                "crossing_floor",
                "R_k(t) = eta n has at least (1-eps) eta n/2 distinct solutions, eps=0.1",
                format!("k={k};eta={eta};distinct={}", report.distinct_solutions()),
                0.9 * eta * pair.n as f64 / 2.0,
                report.distinct_solutions() as f64,
            ));
        }
    }
    Ok(out)
}

/// Exactly one real zero for each pair member.
pub fn audit_real_zeros(k: u32, cfg: &RunConfig) -> Result<Vec<AuditReport>> {
    let pair = rudin_shapiro(k)?;
    let mut out = Vec::new();
    for (name, f) in [("P", &pair.p), ("Q", &pair.q)] {
        let roots = find_roots::<f64>(f, None)?;
        let cls = classify(&roots, pair.n, cfg.delta_circle, 2.0);
        out.push(AuditReport::from_bound(
            "real_zeros",
            "P_k and Q_k have exactly one real zero",
            format!("k={k};member={name};count={}", cls.real_zeros),
            (cls.real_zeros as f64 - 1.0).abs(),
            0.5,
        ));
    }
    Ok(out)
}

/// Unimodular zero fraction of a Fekete polynomial within [0.49, 0.52].
pub fn audit_fekete(p: u64, cfg: &RunConfig) -> Result<AuditReport> {
    let f = fekete(p)?;
    let n_grid = (cfg.grid_factor.max(8) * p as usize).next_power_of_two();
    let count = unimodular_count_reciprocal::<f64>(&f, n_grid)?;
    let frac = count.fraction();
    let outside = (0.49 - frac).max(frac - 0.52).max(0.0);
    Ok(AuditReport::from_bound(
        "fekete_fraction",
        "unimodular zero count of f_p is near kappa_0 p, kappa_0 ~ 0.5007",
        format!("k=0;p={p};count={};fraction={frac:.6}", count.count()),
        outside,
        0.0,
    ))
}

/// Saffari CDF discrepancy at k regressed against the pilot-frozen value,
/// plus the closed-form arcsine anchor at k=1.
pub fn audit_saffari(k: u32, cfg: &RunConfig, calib: &Calibration) -> Result<Vec<AuditReport>> {
    let n_grid = (cfg.grid_factor.max(16) << k).next_power_of_two();
    let rep = saffari_discrepancy(k, n_grid)?;
    let mut out = Vec::new();
    if k == 1 {
        let anchor_grid = 1usize << 16;
        let fine = saffari_discrepancy(1, anchor_grid)?;
        out.push(AuditReport::from_bound(
            "saffari_arcsine_anchor",
            "k=1 CDF discrepancy equals the arcsine-law value",
            format!("k=1;grid={anchor_grid};closed_form={:.6}", arcsine_sup_dev()),
            (fine.sup_dev - arcsine_sup_dev()).abs(),
            1e-3,
        ));
    }
    if let Some(bound) = calib.get(&format!("saffari_supdev_k{k}_max")) {
        out.push(AuditReport::from_bound(
            "saffari_regression",
            "CDF sup deviation stays at its pilot-frozen level",
            format!("k={k};grid={n_grid};sup_dev={:.6}", rep.sup_dev),
            rep.sup_dev,
            bound,
        ));
    }
    Ok(out)
}

/// Ensemble norm limits at n=64 with the configured seed.
pub fn audit_ensemble(cfg: &RunConfig) -> Result<Vec<AuditReport>> {
    let q4 = ensemble_mean(64, EnsembleStat::NormPower { q: 4.0 }, 2000, cfg.seed)?;
    let mahler = ensemble_mean(64, EnsembleStat::MahlerRatio, 2000, cfg.seed)?;
    Ok(vec![
        AuditReport::from_bound(
            "ensemble_q4",
            "mean M_4^4/n^2 over random sign vectors -> Gamma(3) = 2",
            format!(
                "n=64;samples=2000;seed={};mean={:.6};std_err={:.6}",
                cfg.seed, q4.mean, q4.std_err
            ),
            (q4.mean - 2.0).abs(),
            3.0 * q4.std_err,
        ),
        AuditReport::from_bound(
            "ensemble_mahler",
            "mean M_0/sqrt(n) over random sign vectors -> e^{-gamma_euler/2} = 0.749306",
            format!(
                "n=64;samples=2000;seed={};mean={:.6};std_err={:.6}",
                cfg.seed, mahler.mean, mahler.std_err
            ),
            (mahler.mean - 0.749306).abs(),
            0.03,
        ),
    ])
}

/// Two-route Mahler agreement on a pair member, quadrature N escalating by
/// doubling until the estimate stabilizes.
pub fn audit_mahler_routes(k: u32) -> Result<AuditReport> {
    let pair = rudin_shapiro(k)?;
    let roots = find_roots::<f64>(&pair.p, None)?;
    let leading = polylab::Complex64::new(*pair.p.coeffs().last().unwrap() as f64, 0.0);
    let jensen = mahler_jensen(&roots, leading)?;
    let mut n_grid = (8 * pair.n).next_power_of_two();
    let mut prev: Option<f64> = None;
    let mut quad = mahler_quadrature::<f64>(&pair.p, n_grid)?.value;
    while n_grid < (1 << 23) {
        n_grid *= 2;
        let next = mahler_quadrature::<f64>(&pair.p, n_grid)?.value;
        let delta = (next - quad).abs() / next;
        quad = next;
        if delta <= 1e-6 && prev.is_some() {
            break;
        }
        prev = Some(delta);
    }
    Ok(AuditReport::from_bound(
        "mahler_routes",
        "quadrature and Jensen routes agree on M_0",
        format!("k={k};grid={n_grid};quad={quad:.9};jensen={:.9}", jensen.value),
        (quad - jensen.value).abs() / jensen.value,
        1e-6,
    ))
}

/// Dispatch an audit by name over a generation range.
pub fn run_named(
    name: &str,
    k_range: (u32, u32),
    alpha: Option<f64>,
    etas: &[f64],
    cfg: &RunConfig,
    calib: &Calibration,
) -> Result<Vec<AuditReport>> {
    let (lo, hi) = k_range;
    let mut out = Vec::new();
    match name {
        "eq11" => {
            for k in lo..=hi {
                out.push(audit_parallelogram(k, cfg.grid_factor)?);
            }
        }
        "mirror" => {
            for k in lo..=hi {
                out.push(audit_mirror(k, cfg.grid_factor)?);
            }
        }
        "parseval" => {
            for k in lo..=hi {
                out.push(audit_parseval(k, cfg.grid_factor)?);
            }
        }
        "m4" => {
            for k in lo..=hi {
                out.push(audit_m4(k)?);
            }
        }
        "autocorr-bound" => {
            for k in lo..=hi {
                out.push(audit_autocorr_bound(k, calib)?);
            }
        }
        "autocorr-exponent" => out.extend(audit_autocorr_exponent(lo, hi)?),
        "rou-floor" => {
            for k in lo..=hi {
                out.push(audit_rou_floor(k)?);
            }
        }
        "sublevel" => {
            for k in lo..=hi {
                for a in alpha.map(|a| vec![a]).unwrap_or_else(|| vec![0.1, 0.25, 0.5]) {
                    out.extend(audit_sublevel(k, a, cfg)?);
                }
            }
        }
        "nearest-zero" => {
            for k in lo..=hi {
                out.push(audit_nearest_zero(k, cfg, calib)?);
            }
        }
        "bernstein" => {
            for k in lo..=hi {
                out.extend(audit_bernstein(k, cfg)?);
            }
        }
        "crossings" => {
            let etas = if etas.is_empty() {
                vec![0.1, 0.2, 0.29, 1.0]
            } else {
                etas.to_vec()
            };
            for k in lo..=hi {
                out.extend(audit_crossings(k, &etas, cfg)?);
            }
        }
        "real-zeros" => {
            for k in lo..=hi {
                out.extend(audit_real_zeros(k, cfg)?);
            }
        }
        "fekete" => {
            for &p in &cfg.prime_list {
                out.push(audit_fekete(p, cfg)?);
            }
        }
        "saffari" => {
            for k in lo..=hi {
                out.extend(audit_saffari(k, cfg, calib)?);
            }
        }
        "ensemble" => out.extend(audit_ensemble(cfg)?),
        "mahler-routes" => {
            for k in lo..=hi {
                out.push(audit_mahler_routes(k)?);
            }
        }
        other => bail!(
            "unknown audit {other:?}; known: eq11, mirror, parseval, m4, autocorr-bound, \
             autocorr-exponent, rou-floor, sublevel, nearest-zero, bernstein, crossings, \
             real-zeros, fekete, saffari, ensemble, mahler-routes"
        ),
    }
    Ok(out)
}
