//! Root classification relative to the unit circle, and winding-number
//! counting along circular contours as an independent oracle.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::eval::eval_point;
use crate::num::{fr, fu, KahanSum, Real};
use crate::poly::SignedPoly;

use super::RootSet;

/// Counts of roots by position relative to the unit circle. `inside`,
/// `on_circle`, and `outside` partition the root set at tolerance
/// `delta_circle`; `annulus` counts the band 1 - c1/n < |z| < 1 + c1/n.
#[derive(Clone, Copy, Debug)]
pub struct ZeroClassification {
    pub n: usize,
    pub delta_circle: f64,
    pub c1: f64,
    pub on_circle: usize,
    pub inside: usize,
    pub outside: usize,
    pub annulus: usize,
    pub real_zeros: usize,
    pub degree: usize,
}

impl ZeroClassification {
    pub fn on_circle_fraction(&self) -> f64 {
        self.on_circle as f64 / self.n as f64
    }

    pub fn annulus_fraction(&self) -> f64 {
        self.annulus as f64 / self.n as f64
    }
}

pub fn classify<F: Real>(
    roots: &RootSet<F>,
    n: usize,
    delta_circle: F,
    c1: F,
) -> ZeroClassification {
    let lo = F::one() - c1 / fu(n);
    let hi = F::one() + c1 / fu(n);
    let mut on_circle = 0;
    let mut inside = 0;
    let mut outside = 0;
    let mut annulus = 0;
    let mut real_zeros = 0;
    for z in &roots.roots {
        let m = z.norm();
        if (m - F::one()).abs() <= delta_circle {
            on_circle += 1;
        } else if m < F::one() {
            inside += 1;
        } else {
            outside += 1;
        }
        if m > lo && m < hi {
            annulus += 1;
        }
        if z.im.abs() <= delta_circle {
            real_zeros += 1;
        }
    }
    ZeroClassification {
        n,
        delta_circle: delta_circle.to_f64().unwrap_or(f64::NAN),
        c1: c1.to_f64().unwrap_or(f64::NAN),
        on_circle,
        inside,
        outside,
        annulus,
        real_zeros,
        degree: roots.roots.len(),
    }
}

/// Number of zeros of f strictly inside |z| = rho, as the winding number of
/// f along the contour: the summed argument increments over an adaptively
/// refined sampling, each increment kept below pi/2. Errors out when the
/// contour passes too close to a zero for the sampling to certify anything.
pub fn argument_principle_count<F: Real>(
    f: &SignedPoly,
    rho: F,
    n_samples: usize,
) -> Result<i64> {
    if n_samples < 8 {
        return Err(Error::GridTooSmall {
            n_grid: n_samples,
            required: 8,
        });
    }
    if rho <= F::zero() {
        return Err(Error::Domain("contour radius must be positive".into()));
    }
    let rho_f = rho.to_f64().unwrap_or(f64::NAN);
    if f.degree() as f64 * rho_f.ln().abs() > 600.0 {
        return Err(Error::Domain(format!(
            "contour values overflow f64 at degree {} radius {rho_f}",
            f.degree()
        )));
    }

    // derivative bound on the contour: sum j |c_j| rho^{j-1}
    let mut deriv_bound = F::zero();
    let mut rho_pow = F::one();
    for (j, &c) in f.coeffs().iter().enumerate() {
        if j >= 1 {
            deriv_bound += fu::<F>(j) * fr::<F>((c as i64).abs() as f64) * rho_pow;
            rho_pow *= rho;
        }
    }
    let step = fr::<F>(std::f64::consts::TAU) / fu(n_samples);

    let at = |theta: F| -> Complex<F> {
        let (s, c) = theta.sin_cos();
        eval_point(f, Complex::new(rho * c, rho * s))
    };

    // per arc of width dt, linear interpolation of f is off by at most
    // ~ M1 * rho * dt / 2; an arc is accepted only when both endpoint
    // moduli clear ten times that bound, otherwise it is subdivided
    let err_scale = fr::<F>(10.0) * deriv_bound * rho / fr::<F>(2.0);

    let mut total = KahanSum::new();
    let mut theta0 = F::zero();
    let mut v0 = at(theta0);
    let first = v0;
    for m in 1..=n_samples {
        let theta1 = step * fu(m);
        let v1 = if m == n_samples { first } else { at(theta1) };
        arc_increment(&at, err_scale, theta0, v0, theta1, v1, 0, &mut total)?;
        theta0 = theta1;
        v0 = v1;
    }
    let winding = total.value() / fr::<F>(std::f64::consts::TAU);
    let rounded = winding.round();
    let drift = (winding - rounded).abs();
    if drift > fr(1e-6) {
        return Err(Error::Verification {
            what: "winding number integrality",
            deviation: drift.to_f64().unwrap_or(f64::NAN),
            tolerance: 1e-6,
        });
    }
    Ok(rounded.to_f64().unwrap_or(f64::NAN) as i64)
}

/// Winding count with the sample count doubled until the contour
/// precondition holds, up to `max_samples`. Roots close to (but not on)
/// the contour just need finer initial sampling.
pub fn argument_principle_count_adaptive<F: Real>(
    f: &SignedPoly,
    rho: F,
    mut n_samples: usize,
    max_samples: usize,
) -> Result<i64> {
    loop {
        match argument_principle_count(f, rho, n_samples) {
            Err(Error::ContourNearZero { .. }) if n_samples < max_samples => {
                n_samples *= 2;
            }
            other => return other,
        }
    }
}

fn arc_increment<F: Real>(
    at: &impl Fn(F) -> Complex<F>,
    err_scale: F,
    t0: F,
    v0: Complex<F>,
    t1: F,
    v1: Complex<F>,
    depth: usize,
    total: &mut KahanSum<F>,
) -> Result<()> {
    let required = err_scale * (t1 - t0);
    let min_modulus = v0.norm().min(v1.norm());
    let delta = (v1 * v0.conj()).arg();
    if min_modulus >= required && delta.abs() < F::FRAC_PI_2() {
        total.add(delta);
        return Ok(());
    }
    if depth >= 48 {
        return Err(Error::ContourNearZero {
            arc_start: t0.to_f64().unwrap_or(f64::NAN),
            arc_end: t1.to_f64().unwrap_or(f64::NAN),
            min_modulus: min_modulus.to_f64().unwrap_or(f64::NAN),
            required: required.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mid = (t0 + t1) / fr(2.0);
    let vm = at(mid);
    arc_increment(at, err_scale, t0, v0, mid, vm, depth + 1, total)?;
    arc_increment(at, err_scale, mid, vm, t1, v1, depth + 1, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{fekete, rudin_shapiro};
    use crate::zeros::find_roots;

    #[test]
    fn winding_examples() {
        let f = SignedPoly::new(vec![1, 1]).unwrap();
        assert_eq!(argument_principle_count::<f64>(&f, 2.0, 64).unwrap(), 1);
        assert_eq!(argument_principle_count::<f64>(&f, 0.5, 64).unwrap(), 0);
    }

    #[test]
    fn winding_counts_origin_zeros() {
        // fekete(5) = z (1-z)^2 (1+z): inside rho=0.5 only the origin zero
        let f = fekete(5).unwrap().poly;
        let count = argument_principle_count_adaptive::<f64>(&f, 0.5, 256, 1 << 14).unwrap();
        assert_eq!(count, 1);
    }

    #[test]
    fn winding_matches_root_finder_bands() {
        for k in [4u32, 6, 8] {
            let pair = rudin_shapiro(k).unwrap();
            let roots = find_roots::<f64>(&pair.p, None).unwrap();
            for rho in [0.9f64, 1.1] {
                let inside = roots.count_inside(rho) as i64;
                let winding =
                    argument_principle_count_adaptive::<f64>(&pair.p, rho, 16 * pair.n, 1 << 20)
                        .unwrap();
                assert_eq!(winding, inside, "k={k} rho={rho}");
            }
        }
    }

    #[test]
    fn annulus_difference_matches_classification() {
        let pair = rudin_shapiro(2).unwrap();
        let roots = find_roots::<f64>(&pair.p, None).unwrap();
        let in_band = roots.count_in_band(0.8, 1.25) as i64;
        let lo = argument_principle_count_adaptive::<f64>(&pair.p, 0.8, 256, 1 << 16).unwrap();
        let hi = argument_principle_count_adaptive::<f64>(&pair.p, 1.25, 256, 1 << 16).unwrap();
        assert_eq!(hi - lo, in_band);
    }

    #[test]
    fn classify_p1() {
        let pair = rudin_shapiro(1).unwrap();
        let roots = find_roots::<f64>(&pair.p, None).unwrap();
        let c = classify(&roots, pair.n, 1e-8, 2.0);
        assert_eq!(c.on_circle, 1);
        assert_eq!(c.real_zeros, 1);
        assert_eq!(c.inside + c.outside + c.on_circle, c.degree);
    }

    #[test]
    fn classify_fekete5_unimodular() {
        let f = fekete(5).unwrap().poly;
        let roots = find_roots::<f64>(&f, None).unwrap();
        // z=0 is inside; the other three zeros are on the circle; the double
        // root at 1 converges like sqrt(eps) so the circle tolerance is loose
        let c = classify(&roots, 5, 1e-5, 2.0);
        assert_eq!(c.on_circle, 3);
        assert_eq!(c.inside, 1);
    }

    #[test]
    fn contour_through_zero_is_rejected() {
        // P_1 has its zero at -1, exactly on the unit contour
        let pair = rudin_shapiro(1).unwrap();
        assert!(matches!(
            argument_principle_count::<f64>(&pair.p, 1.0, 64),
            Err(Error::ContourNearZero { .. })
        ));
    }
}
