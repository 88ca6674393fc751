//! M_q norms on the unit circle for 0 < q <= infinity, and the Mahler
//! measure M_0 by two independent routes: grid quadrature of log|f| and the
//! Jensen product over a complete root set.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::eval::{self, eval_point, GridSamples};
use crate::num::{fi, fr, fu, KahanSum, Real};
use crate::poly::SignedPoly;
use crate::zeros::RootSet;

/// Exponent tag of a norm result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QTag<F> {
    Zero,
    Finite(F),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormRoute {
    Quadrature,
    Jensen,
    ExactParseval,
}

#[derive(Clone, Copy, Debug)]
pub struct NormResult<F> {
    pub q: QTag<F>,
    pub value: F,
    pub n_grid: usize,
    pub route: NormRoute,
}

/// M_q(f) for finite q > 0 by grid quadrature (the uniform grid is the
/// trapezoid rule on the period), or M_infinity by grid max plus
/// golden-section refinement of the bracketing arc.
pub fn mq_norm<F: Real>(f: &SignedPoly, q: QTag<F>, n_grid: usize) -> Result<NormResult<F>> {
    let required = 4 * (f.degree() + 1);
    if n_grid < required {
        return Err(Error::GridTooSmall { n_grid, required });
    }
    match q {
        QTag::Zero => Err(Error::Domain(
            "q = 0 is the Mahler measure: use mahler_quadrature".into(),
        )),
        QTag::Finite(qv) => {
            if qv <= F::zero() {
                return Err(Error::Domain(
                    "q <= 0 is not a norm exponent: use mahler_quadrature".into(),
                ));
            }
            let samples: GridSamples<F> = eval::eval_grid(f, n_grid)?;
            let half_q = qv / fr(2.0);
            let mut acc = KahanSum::new();
            for v in &samples.values {
                acc.add(v.norm_sqr().powf(half_q));
            }
            let mean = acc.value() / fu(n_grid);
            Ok(NormResult {
                q,
                value: mean.powf(F::one() / qv),
                n_grid,
                route: NormRoute::Quadrature,
            })
        }
        QTag::Infinity => {
            let samples: GridSamples<F> = eval::eval_grid(f, n_grid)?;
            let best = samples.argmax_modulus();
            let step = eval::two_pi::<F>() / fu(n_grid);
            let center = samples.angle_of(best);
            let modulus = |t: F| {
                let (s, c) = t.sin_cos();
                eval_point(f, Complex::new(c, s)).norm()
            };
            let (_, refined) =
                golden_section_max(&modulus, center - step, center + step, fr(1e-12));
            let value = refined.max(samples.values[best].norm());
            Ok(NormResult {
                q,
                value,
                n_grid,
                route: NormRoute::Quadrature,
            })
        }
    }
}

/// sqrt of the exact coefficient square sum: M_2 through Parseval, no grid.
pub fn m2_exact<F: Real>(f: &SignedPoly) -> NormResult<F> {
    NormResult {
        q: QTag::Finite(fr(2.0)),
        value: fi::<F>(f.coeff_square_sum()).sqrt(),
        n_grid: 0,
        route: NormRoute::ExactParseval,
    }
}

/// Golden-section search for the maximum of a unimodal bracket.
pub(crate) fn golden_section_max<F: Real>(
    f: &impl Fn(F) -> F,
    mut lo: F,
    mut hi: F,
    tol: F,
) -> (F, F) {
    let inv_phi = fr::<F>(0.618_033_988_749_894_9);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = (lo + hi) / fr(2.0);
    (mid, f(mid))
}

/// Exact removal of z^m, (z-1)^a, and (z+1)^b factors by integer synthetic
/// division. These factors all have Mahler measure 1, and they are the ones
/// a power-of-two evaluation grid is guaranteed to step on.
fn deflate_unit_factors(f: &SignedPoly) -> Vec<i64> {
    let (shifted, _) = f.deflate_origin();
    let mut c: Vec<i64> = shifted.coeffs().iter().map(|&x| x as i64).collect();
    for root in [1i64, -1] {
        loop {
            if c.len() == 1 {
                break;
            }
            let value: i64 = c
                .iter()
                .rev()
                .fold(0i64, |acc, &x| acc.checked_mul(root).unwrap() + x);
            if value != 0 {
                break;
            }
            let mut quotient = vec![0i64; c.len() - 1];
            let mut carry = 0i64;
            for j in (0..c.len()).rev() {
                if j == c.len() - 1 {
                    carry = c[j];
                } else {
                    let next = c[j] + root * carry;
                    if j == 0 {
                        debug_assert_eq!(next, 0, "nonzero remainder in exact deflation");
                        break;
                    }
                    carry = next;
                }
                quotient[j - 1] = carry;
                if j == 1 {
                    break;
                }
            }
            c = quotient;
        }
    }
    c
}

/// Mahler measure by quadrature: exp of the grid mean of log|f|. Factors
/// z^m (z-1)^a (z+1)^b are deflated exactly first (their Mahler measure is
/// 1, and their zeros sit on every power-of-two grid). Convergence is slow
/// (O(1/N)-ish) when other unimodular zeros remain: the integrable
/// singularity of log|f| is sampled, never resolved. Doubling N and
/// comparing is the intended convergence estimate.
pub fn mahler_quadrature<F: Real>(f: &SignedPoly, n_grid: usize) -> Result<NormResult<F>> {
    let required = 4 * (f.degree() + 1);
    if n_grid < required {
        return Err(Error::GridTooSmall { n_grid, required });
    }
    let deflated = deflate_unit_factors(f);
    if deflated.len() == 1 {
        // f was a product of unit-measure factors times a constant
        return Ok(NormResult {
            q: QTag::Zero,
            value: fi::<F>(deflated[0].abs()),
            n_grid,
            route: NormRoute::Quadrature,
        });
    }
    let coeffs: Vec<F> = deflated.iter().map(|&x| fi(x)).collect();
    let values = eval::eval_grid_real_coeffs(&coeffs, n_grid)?;
    let sq_sum: f64 = deflated.iter().map(|&x| (x as f64) * (x as f64)).sum();
    let floor = fr::<F>(1e-13) * fr::<F>(sq_sum.sqrt());
    let floor_sq = floor * floor;
    let mut acc = KahanSum::new();
    for (m, v) in values.iter().enumerate() {
        let ns = v.norm_sqr();
        if ns < floor_sq {
            return Err(Error::SingularSample {
                angle: 2.0 * std::f64::consts::PI * m as f64 / n_grid as f64,
                modulus: ns.sqrt().to_f64().unwrap_or(f64::NAN),
                floor: floor.to_f64().unwrap_or(f64::NAN),
            });
        }
        acc.add(ns.ln());
    }
    let mean_log = acc.value() / fu(n_grid) / fr(2.0);
    Ok(NormResult {
        q: QTag::Zero,
        value: mean_log.exp(),
        n_grid,
        route: NormRoute::Quadrature,
    })
}

/// Mahler measure from a complete converged root set through the Jensen
/// product |c| * prod max(1, |z_j|).
pub fn mahler_jensen<F: Real>(roots: &RootSet<F>, leading: Complex<F>) -> Result<NormResult<F>> {
    if !roots.converged || roots.roots.len() != roots.degree {
        return Err(Error::Domain(format!(
            "jensen route needs a complete converged root set ({} of {} roots, converged: {})",
            roots.roots.len(),
            roots.degree,
            roots.converged
        )));
    }
    let mut log_acc = KahanSum::new();
    log_acc.add(leading.norm().ln());
    for z in &roots.roots {
        let m = z.norm();
        if m > F::one() {
            log_acc.add(m.ln());
        }
    }
    Ok(NormResult {
        q: QTag::Zero,
        value: log_acc.value().exp(),
        n_grid: 0,
        route: NormRoute::Jensen,
    })
}

/// M_4(P_k)^4 / (4^{k+1}/3), with the fourth power taken from exact integer
/// autocorrelations: M_4^4 = a_0^2 + 2 sum_{j>=1} a_j^2.
pub fn m4_ratio(k: u32) -> Result<f64> {
    if k > 20 {
        return Err(Error::Capacity {
            what: "m4_ratio generation k",
            requested: k as usize,
            max: 20,
        });
    }
    let pair = crate::poly::rudin_shapiro_with_cap(k, 20)?;
    let m44 = m4_fourth_power_int(&pair.p)?;
    Ok(3.0 * m44 as f64 / 4f64.powi(k as i32 + 1))
}

/// Exact integer M_4(f)^4 for a sign polynomial.
pub fn m4_fourth_power_int(f: &SignedPoly) -> Result<i128> {
    let a = eval::autocorr_int(f)?;
    let mut acc: i128 = (a[0] as i128) * (a[0] as i128);
    for &aj in &a[1..] {
        acc += 2 * (aj as i128) * (aj as i128);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{fekete, rudin_shapiro};
    use crate::zeros::find_roots;

    #[test]
    fn parseval_m2_rudin_shapiro() {
        for k in [1u32, 6, 12] {
            let pair = rudin_shapiro(k).unwrap();
            let r = mq_norm::<f64>(&pair.p, QTag::Finite(2.0), 4 * pair.n).unwrap();
            let expect = (pair.n as f64).sqrt();
            assert!(
                (r.value - expect).abs() <= 1e-10 * expect,
                "k={k}: {} vs {}",
                r.value,
                expect
            );
        }
    }

    #[test]
    fn m_infinity_of_p1_is_two() {
        let pair = rudin_shapiro(1).unwrap();
        let r = mq_norm::<f64>(&pair.p, QTag::Infinity, 16).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn m4_of_p1_is_sixth_root() {
        let pair = rudin_shapiro(1).unwrap();
        let r = mq_norm::<f64>(&pair.p, QTag::Finite(4.0), 64).unwrap();
        assert!((r.value - 6f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn mq_domain_errors() {
        let pair = rudin_shapiro(2).unwrap();
        assert!(mq_norm::<f64>(&pair.p, QTag::Finite(2.0), 8).is_err());
        assert!(mq_norm::<f64>(&pair.p, QTag::Zero, 64).is_err());
        assert!(mq_norm::<f64>(&pair.p, QTag::Finite(-1.0), 64).is_err());
    }

    #[test]
    fn mahler_of_z_plus_one_is_one() {
        let f = SignedPoly::new(vec![1, 1]).unwrap();
        let r = mahler_quadrature::<f64>(&f, 16).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mahler_of_deflated_fekete5_is_one() {
        // fekete(5)/z = (1-z)^2 (1+z): all unit factors
        let (g, _) = fekete(5).unwrap().poly.deflate_origin();
        let r = mahler_quadrature::<f64>(&g, 32).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mahler_ratio_of_rudin_shapiro_is_stable_and_positive() {
        let mut prev: Option<f64> = None;
        for k in [6u32, 7, 8, 9, 10] {
            let pair = rudin_shapiro(k).unwrap();
            let n_grid = 256 * pair.n;
            let r = mahler_quadrature::<f64>(&pair.p, n_grid).unwrap();
            let ratio = r.value / (pair.n as f64).sqrt();
            assert!(ratio > 0.5 && ratio < 1.0, "k={k}: ratio {ratio}");
            if let Some(p) = prev {
                assert!((ratio - p).abs() < 0.05, "k={k}: ratio jumped {p} -> {ratio}");
            }
            prev = Some(ratio);
        }
    }

    #[test]
    fn jensen_trivial_examples() {
        let single = RootSet {
            roots: vec![Complex::new(-1.0f64, 0.0)],
            residuals: vec![0.0],
            step_estimates: vec![0.0],
            degree: 1,
            converged: true,
            iterations: 0,
        };
        let r = mahler_jensen(&single, Complex::new(1.0, 0.0)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);

        let two = RootSet {
            roots: vec![Complex::new(2.0f64, 0.0)],
            residuals: vec![0.0],
            step_estimates: vec![0.0],
            degree: 1,
            converged: true,
            iterations: 0,
        };
        let r = mahler_jensen(&two, Complex::new(2.0, 0.0)).unwrap();
        assert!((r.value - 4.0).abs() < 1e-14);
    }

    #[test]
    fn jensen_matches_quadrature_for_p2() {
        let pair = rudin_shapiro(2).unwrap();
        let roots = find_roots::<f64>(&pair.p, None).unwrap();
        let leading = Complex::new(*pair.p.coeffs().last().unwrap() as f64, 0.0);
        let jensen = mahler_jensen(&roots, leading).unwrap();
        let quad = mahler_quadrature::<f64>(&pair.p, 1 << 14).unwrap();
        assert!(
            (jensen.value - quad.value).abs() <= 1e-8 * jensen.value,
            "jensen {} vs quadrature {}",
            jensen.value,
            quad.value
        );
    }

    #[test]
    fn m4_ratio_anchors() {
        assert!((m4_ratio(1).unwrap() - 1.125).abs() < 1e-14);
        assert!((m4_ratio(2).unwrap() - 0.9375).abs() < 1e-14);
    }

    #[test]
    fn m4_integer_identity_matches_quadrature() {
        for k in 1..=6u32 {
            let pair = rudin_shapiro(k).unwrap();
            let m44 = m4_fourth_power_int(&pair.p).unwrap() as f64;
            let quad = mq_norm::<f64>(&pair.p, QTag::Finite(4.0), 8 * pair.n).unwrap();
            assert!(
                (quad.value.powi(4) - m44).abs() <= 1e-9 * m44,
                "k={k}: quadrature {} vs integers {}",
                quad.value.powi(4),
                m44
            );
        }
    }

    #[test]
    fn norms_nondecreasing_in_q() {
        let pair = rudin_shapiro(5).unwrap();
        let n_grid = 16 * pair.n;
        let mahler = mahler_quadrature::<f64>(&pair.p, n_grid).unwrap().value;
        let qs = [0.5f64, 1.0, 2.0, 4.0, 8.0];
        let mut prev = mahler * (1.0 - 1e-9);
        for &qv in &qs {
            let v = mq_norm::<f64>(&pair.p, QTag::Finite(qv), n_grid).unwrap().value;
            assert!(v >= prev * (1.0 - 1e-9), "q={qv}: {v} < {prev}");
            prev = v;
        }
        let vinf = mq_norm::<f64>(&pair.p, QTag::Infinity, n_grid).unwrap().value;
        assert!(vinf >= prev * (1.0 - 1e-9));
    }

    #[test]
    fn parseval_exactness_for_signed_polys() {
        let f7 = fekete(7).unwrap().poly;
        let r = mq_norm::<f64>(&f7, QTag::Finite(2.0), 64).unwrap();
        let exact = m2_exact::<f64>(&f7);
        assert!((r.value - exact.value).abs() <= 1e-10 * exact.value);
        assert_eq!(exact.route, NormRoute::ExactParseval);
    }
}
