//! Pointwise inequality audits: the root-of-unity floor for |P_k|^2, the
//! derivative-implies-nearby-zero check, and the Bernstein-type derivative
//! bound for zero-free disks.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::{eval_grid, two_pi, CosinePoly, GridSamples};
use crate::norms::golden_section_max;
use crate::num::{fr, fu, Real};
use crate::poly::rudin_shapiro;
use crate::report::AuditReport;

use super::RootSet;

/// gamma = sin^2(pi/8), the floor constant for |P_k|^2 at roots of unity.
pub fn gamma_floor() -> f64 {
    let s = (std::f64::consts::PI / 8.0).sin();
    s * s
}

/// For every even j, max(|P_k(z_j)|^2, |P_k(z_{j+-1})|^2) >= 2 gamma n at
/// the n-th roots of unity z_j. Returns the minimal achieved ratio against
/// 2 gamma n; the audit passes when it stays >= 1.
pub fn root_of_unity_floor(k: u32) -> Result<AuditReport> {
    if k > 18 {
        return Err(Error::Capacity {
            what: "root-of-unity floor generation k",
            requested: k as usize,
            max: 18,
        });
    }
    let pair = rudin_shapiro(k)?;
    let n = pair.n;
    let samples: GridSamples<f64> = eval_grid(&pair.p, n.max(1))?;
    let sq: Vec<f64> = samples.values.iter().map(|v| v.norm_sqr()).collect();
    let floor = 2.0 * gamma_floor() * n as f64;
    let mut min_ratio = f64::INFINITY;
    let mut j = 0usize;
    while j < n.max(1) {
        let here = sq[j % n.max(1)];
        for r in [1usize, n.max(1) - 1] {
            let near = sq[(j + r) % n.max(1)];
            let ratio = here.max(near) / floor;
            if ratio < min_ratio {
                min_ratio = ratio;
            }
        }
        j += 2;
    }
    Ok(AuditReport::from_bound(
        "root_of_unity_floor",
        "max(|P(z_j)|^2, |P(z_j+-1)|^2) >= 2*sin^2(pi/8)*n at even j",
        format!("k={k};n={n}"),
        1.0,
        min_ratio,
    ))
}

/// Result of the nearest-zero audit, with the empirical constant
/// max n*dist(e^{i t0}, roots) over qualifying angles.
#[derive(Clone, Debug)]
pub struct NearestZeroAudit {
    pub report: AuditReport,
    pub qualifying: usize,
    pub max_n_dist: f64,
    pub worst_angle: f64,
}

/// Wherever R'(t0) >= c n^2 on the grid, some root of f must sit within
/// c4/n of e^{i t0}. Scans the derivative grid, measures the worst
/// normalized distance, and checks it against the supplied c4.
pub fn nearest_zero_audit<F: Real>(
    r: &CosinePoly<F>,
    c: F,
    roots: &RootSet<F>,
    n_scale: usize,
    n_grid: usize,
    c4: f64,
) -> Result<NearestZeroAudit> {
    if !roots.converged {
        return Err(Error::Domain(
            "nearest-zero audit needs a converged root set".into(),
        ));
    }
    let deriv = r.derivative_grid_values(n_grid)?;
    let threshold = c * fu::<F>(n_scale) * fu::<F>(n_scale);
    let qualifying: Vec<usize> = (0..n_grid).filter(|&m| deriv[m] >= threshold).collect();
    let step = two_pi::<F>() / fu(n_grid);
    let worst = qualifying
        .par_iter()
        .map(|&m| {
            let t = step * fu::<F>(m);
            let (s, cos) = t.sin_cos();
            let point = num_complex::Complex::new(cos, s);
            let mut best = F::infinity();
            for z in &roots.roots {
                let d = (z - point).norm();
                if d < best {
                    best = d;
                }
            }
            (best.to_f64().unwrap_or(f64::NAN) * n_scale as f64, m)
        })
        .reduce(
            || (0.0f64, usize::MAX),
            |a, b| if a.0 >= b.0 { a } else { b },
        );
    let (max_n_dist, worst_m) = worst;
    let worst_angle = if worst_m == usize::MAX {
        f64::NAN
    } else {
        2.0 * std::f64::consts::PI * worst_m as f64 / n_grid as f64
    };
    let report = AuditReport::from_bound(
        "nearest_zero",
        "R'(t0) >= c*n^2 implies a zero within c4/n of e^{i t0}",
        format!(
            "c={};n={n_scale};grid={n_grid};qualifying={}",
            c.to_f64().unwrap_or(f64::NAN),
            qualifying.len()
        ),
        max_n_dist,
        c4,
    );
    Ok(NearestZeroAudit {
        report,
        qualifying: qualifying.len(),
        max_n_dist,
        worst_angle,
    })
}

/// Bernstein-type derivative bound: |S'(a)| <= 5e sqrt(2n/r) max|S| for a
/// real trigonometric polynomial of degree n with no zeros (as a function
/// of complex t) within distance r of the real point a. The zero-free
/// hypothesis is verified from the supplied root set of the associated
/// algebraic polynomial; if it cannot be verified the audit is
/// inconclusive.
pub fn bernstein_audit<F: Real>(
    s: &CosinePoly<F>,
    a: F,
    radius: F,
    roots_of_s: &RootSet<F>,
) -> Result<AuditReport> {
    let r64 = radius.to_f64().unwrap_or(f64::NAN);
    if !(r64 > 0.0 && r64 <= 2.0) {
        return Err(Error::Domain(format!(
            "bernstein audit radius must lie in (0, 2], got {r64}"
        )));
    }
    let trig_degree = s.trig_degree();
    let norm_sup = sup_norm(s)?;
    let lhs = s.derivative_at(a).abs().to_f64().unwrap_or(f64::NAN);
    let rhs = 5.0
        * std::f64::consts::E
        * (2.0 * trig_degree as f64 / r64).sqrt()
        * norm_sup.to_f64().unwrap_or(f64::NAN);
    let name = "bernstein_zero_free";
    let anchor = "|S'(a)| <= 5e*sqrt(2n/r)*max|S| for S zero-free in D(a,r)";
    let params = format!(
        "a={};r={r64};n={trig_degree}",
        a.to_f64().unwrap_or(f64::NAN)
    );

    if !roots_of_s.converged || roots_of_s.roots.len() != roots_of_s.degree {
        return Ok(AuditReport::inconclusive(name, anchor, params, lhs, rhs));
    }
    // zeros of S in the complex t-plane are t = arg(z) - i ln|z| (mod 2pi)
    // over the nonzero roots z of the algebraic lift
    for z in &roots_of_s.roots {
        let m = z.norm();
        if m <= F::zero() {
            continue;
        }
        let mut dt = z.arg() - a;
        let period = two_pi::<F>();
        while dt > F::PI() {
            dt -= period;
        }
        while dt < -F::PI() {
            dt += period;
        }
        let imag = m.ln();
        let dist = (dt * dt + imag * imag).sqrt();
        if dist < radius {
            return Ok(AuditReport::inconclusive(name, anchor, params, lhs, rhs));
        }
    }
    Ok(AuditReport::from_bound(name, anchor, params, lhs, rhs))
}

fn sup_norm<F: Real>(s: &CosinePoly<F>) -> Result<F> {
    let n_grid = (16 * (s.trig_degree() + 1)).next_power_of_two();
    let values = s.grid_values(n_grid)?;
    let mut best = 0usize;
    let mut best_v = F::neg_infinity();
    for (i, v) in values.iter().enumerate() {
        if v.abs() > best_v {
            best_v = v.abs();
            best = i;
        }
    }
    let step = two_pi::<F>() / fu(n_grid);
    let center = step * fu(best);
    let f = |t: F| s.eval(t).abs();
    let (_, refined) = golden_section_max(&f, center - step, center + step, fr(1e-12));
    Ok(refined.max(best_v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::modulus_squared;
    use crate::zeros::find_roots;

    #[test]
    fn floor_examples() {
        // k=1: |P_1(1)|^2 = 4 >= 2 gamma 2
        let rep = root_of_unity_floor(1).unwrap();
        assert!(rep.passed());
        let expect = 4.0 / (4.0 * gamma_floor());
        assert!((rep.rhs - expect).abs() < 1e-12);

        for k in [2u32, 6, 10] {
            let rep = root_of_unity_floor(k).unwrap();
            assert!(rep.passed(), "k={k}: min ratio {}", rep.rhs);
        }
    }

    #[test]
    fn nearest_zero_p1_example() {
        // R' = -2 sin t, n = 2; with c slightly below 1/2 the only
        // qualifying grid angle is 3pi/2, at distance sqrt(2) from the root
        let pair = rudin_shapiro(1).unwrap();
        let r: CosinePoly<f64> = modulus_squared(&pair.p).unwrap();
        let roots = find_roots::<f64>(&pair.p, None).unwrap();
        let audit = nearest_zero_audit(&r, 0.499, &roots, 2, 32, 10.0).unwrap();
        assert_eq!(audit.qualifying, 1);
        assert!((audit.max_n_dist - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!((audit.worst_angle - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(audit.report.passed());
    }

    #[test]
    fn nearest_zero_vacuous_pass() {
        let pair = rudin_shapiro(1).unwrap();
        let r: CosinePoly<f64> = modulus_squared(&pair.p).unwrap();
        let roots = find_roots::<f64>(&pair.p, None).unwrap();
        let audit = nearest_zero_audit(&r, 100.0, &roots, 2, 32, 1.0).unwrap();
        assert_eq!(audit.qualifying, 0);
        assert!(audit.report.passed());
    }

    #[test]
    fn bernstein_examples() {
        // S = 2 + 2 cos t from P_1; algebraic lift (1+z)^2 has the double
        // root at -1, i.e. the only t-plane zero is t = pi
        let pair = rudin_shapiro(1).unwrap();
        let s: CosinePoly<f64> = modulus_squared(&pair.p).unwrap();
        let roots = find_roots::<f64>(&pair.p, None).unwrap().inverted_union();

        let at_zero = bernstein_audit(&s, 0.0, 1.0, &roots).unwrap();
        assert!(at_zero.passed(), "S'(0) = 0 is under any bound");
        assert!(at_zero.lhs.abs() < 1e-12);

        let at_half_pi = bernstein_audit(&s, std::f64::consts::FRAC_PI_2, 0.5, &roots).unwrap();
        assert!(at_half_pi.passed());
        assert!((at_half_pi.lhs - 2.0).abs() < 1e-10);
        let expect_rhs = 40.0 * std::f64::consts::E;
        assert!((at_half_pi.rhs - expect_rhs).abs() < 1e-6 * expect_rhs);
    }

    #[test]
    fn bernstein_inconclusive_when_zero_inside() {
        let pair = rudin_shapiro(1).unwrap();
        let s: CosinePoly<f64> = modulus_squared(&pair.p).unwrap();
        let roots = find_roots::<f64>(&pair.p, None).unwrap().inverted_union();
        // disk of radius 1 about t = pi - 0.5 contains the zero at pi
        let rep = bernstein_audit(&s, std::f64::consts::PI - 0.5, 1.0, &roots).unwrap();
        assert_eq!(rep.status, crate::report::AuditStatus::Inconclusive);
    }
}
