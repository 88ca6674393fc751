//! Simultaneous root finding by the Aberth-Ehrlich iteration.
//!
//! Evaluation branches on |z|: inside the closed unit disk Horner runs on
//! f directly; outside it runs on the reversed polynomial at 1/z, so that
//! neither partial sums nor the final value ever overflow no matter how far
//! an iterate wanders. Residuals are Newton steps |f/f'| — first-order
//! distances to the nearest root — which stay meaningful across the ten
//! orders of magnitude the raw |f| spans between on-circle and outside
//! roots at high degree.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::{horner_compensated, horner_with_derivative, splitmix64};
use crate::num::{fi, fr, fu, Real};
use crate::poly::SignedPoly;

/// Aberth is O(degree^2) per sweep; beyond this cap only contour and
/// sign-change methods are offered.
pub const DEFAULT_DEGREE_CAP: usize = 1 << 14;

const MAX_SWEEPS: usize = 400;
const INITIAL_SEED: u64 = 0x5EED_0F_AB_E417;

/// Computed roots with certified residuals.
#[derive(Clone, Debug)]
pub struct RootSet<F> {
    pub roots: Vec<Complex<F>>,
    /// Certified scaled residuals |f(z_j)| / max(1, |f'(z_j)|), recomputed
    /// with compensated arithmetic independent of the iteration.
    pub residuals: Vec<F>,
    /// The iteration's own Newton-step magnitudes |f/f'| at the final
    /// iterates (plain arithmetic).
    pub step_estimates: Vec<F>,
    pub degree: usize,
    pub converged: bool,
    pub iterations: usize,
}

impl<F: Real> RootSet<F> {
    pub fn count_inside(&self, radius: F) -> usize {
        self.roots.iter().filter(|z| z.norm() < radius).count()
    }

    pub fn count_in_band(&self, lo: F, hi: F) -> usize {
        self.roots
            .iter()
            .filter(|z| {
                let m = z.norm();
                m > lo && m < hi
            })
            .count()
    }

    pub fn max_residual(&self) -> F {
        self.residuals
            .iter()
            .fold(F::zero(), |acc, &r| if r > acc { r } else { acc })
    }

    /// Union with the inverted set {1/z}: the zeros of z^deg * f(1/z), and
    /// hence of |f|^2 viewed as an algebraic polynomial. Origin roots map
    /// to no finite zero and are dropped from the reflection.
    pub fn inverted_union(&self) -> RootSet<F> {
        let mut roots = self.roots.clone();
        let mut residuals = self.residuals.clone();
        let mut steps = self.step_estimates.clone();
        for (i, z) in self.roots.iter().enumerate() {
            if z.norm() > F::zero() {
                roots.push(z.inv());
                residuals.push(self.residuals[i]);
                steps.push(self.step_estimates[i]);
            }
        }
        let degree = roots.len();
        RootSet {
            roots,
            residuals,
            step_estimates: steps,
            degree,
            converged: self.converged,
            iterations: self.iterations,
        }
    }
}

/// Two-sided evaluation scheme: descending coefficients of f for |z| <= 1,
/// descending coefficients of the reversed polynomial g(u) = u^d f(1/u)
/// for |z| > 1, where f(z) = z^d g(1/z) and
/// f'(z) = z^{d-1} (d g(u) - u g'(u)) with u = 1/z.
struct TwoSidedEval<F> {
    desc: Vec<Complex<F>>,
    rev_desc: Vec<Complex<F>>,
    degree: usize,
}

impl<F: Real> TwoSidedEval<F> {
    fn new(f: &SignedPoly) -> Self {
        let desc: Vec<Complex<F>> = f
            .coeffs()
            .iter()
            .rev()
            .map(|&c| Complex::new(fi(c as i64), F::zero()))
            .collect();
        let rev_desc: Vec<Complex<F>> = f
            .coeffs()
            .iter()
            .map(|&c| Complex::new(fi(c as i64), F::zero()))
            .collect();
        TwoSidedEval {
            desc,
            rev_desc,
            degree: f.degree(),
        }
    }

    /// Newton correction w = f(z)/f'(z), stable on both sides of the unit
    /// circle. Returns None when the derivative vanishes to working
    /// precision.
    fn newton_step(&self, z: Complex<F>) -> Option<Complex<F>> {
        let tiny = F::epsilon() * F::epsilon();
        if z.norm_sqr() <= F::one() {
            let (fv, dv) = horner_with_derivative(&self.desc, z);
            if dv.norm_sqr() > tiny * tiny {
                Some(fv / dv)
            } else {
                None
            }
        } else {
            let u = z.inv();
            let (gv, gd) = horner_with_derivative(&self.rev_desc, u);
            let denom = gv * fu::<F>(self.degree) - u * gd;
            if denom.norm_sqr() > tiny * tiny {
                Some(z * gv / denom)
            } else {
                None
            }
        }
    }

    /// Certified scaled residual |f(z)| / max(1, |f'(z)|), evaluated with
    /// compensated Horner (independent of the plain sweeps). Works in log
    /// scale outside the unit disk so nothing overflows.
    fn certified_residual(&self, z: Complex<F>) -> F {
        let zn = z.norm();
        if zn <= F::one() {
            let fv = horner_compensated(self.desc.iter().map(|c| c.re), z).norm();
            let (_, dv) = horner_with_derivative(&self.desc, z);
            fv / dv.norm().max(F::one())
        } else {
            let u = z.inv();
            let gv = horner_compensated(self.rev_desc.iter().map(|c| c.re), u);
            let gd_poly: Vec<F> = self
                .rev_desc
                .iter()
                .take(self.degree)
                .enumerate()
                .map(|(i, c)| c.re * fu::<F>(self.degree - i))
                .collect();
            let gd = horner_compensated(gd_poly.iter().copied(), u);
            let a = gv * fu::<F>(self.degree) - u * gd;
            // log |f'| = (d-1) ln|z| + ln|a|
            let log_fp = fu::<F>(self.degree - 1) * zn.ln() + a.norm().ln();
            if log_fp <= F::zero() {
                // |f'| < 1: the residual is |f| itself
                (fu::<F>(self.degree) * zn.ln() + gv.norm().ln()).exp()
            } else {
                zn * gv.norm() / a.norm()
            }
        }
    }
}

/// Find all roots with the default degree cap. `tol` bounds the certified
/// scaled residual |f(z_j)| / max(1, |f'(z_j)|) — a first-order distance to
/// the root; the default is 1e-10 times the coefficient L2 norm
/// (= 1e-10 * 2^{k/2} for a generation-k pair member).
pub fn find_roots<F: Real>(f: &SignedPoly, tol: Option<F>) -> Result<RootSet<F>> {
    find_roots_with_cap(f, tol, DEFAULT_DEGREE_CAP)
}

pub fn find_roots_with_cap<F: Real>(
    f: &SignedPoly,
    tol: Option<F>,
    degree_cap: usize,
) -> Result<RootSet<F>> {
    if f.degree() > degree_cap {
        return Err(Error::Capacity {
            what: "root finder degree",
            requested: f.degree(),
            max: degree_cap,
        });
    }
    let tol = tol.unwrap_or_else(|| fr::<F>(1e-10) * fi::<F>(f.coeff_square_sum()).sqrt());

    // exact deflation of the origin root (z^m | f)
    let (reduced, origin_multiplicity) = f.deflate_origin();
    let degree = reduced.degree();

    let mut roots: Vec<Complex<F>> = Vec::with_capacity(f.degree());
    for _ in 0..origin_multiplicity {
        roots.push(Complex::new(F::zero(), F::zero()));
    }

    let eval = TwoSidedEval::new(&reduced);
    let mut iterations = 0usize;
    if degree > 0 {
        let mut iter = initial_guesses(&reduced);
        iterations = aberth_sweeps(&eval, &mut iter, tol);
        cluster_smooth(&mut iter);
        polish_stragglers(&eval, &mut iter, tol);
        roots.extend(iter);
    }

    let mut residuals = Vec::with_capacity(roots.len());
    let mut step_estimates = Vec::with_capacity(roots.len());
    for z in &roots {
        if z.norm() == F::zero() && origin_multiplicity > 0 {
            residuals.push(F::zero());
            step_estimates.push(F::zero());
        } else {
            residuals.push(eval.certified_residual(*z));
            step_estimates.push(eval.newton_step(*z).map_or(F::zero(), |w| w.norm()));
        }
    }
    let converged = residuals.iter().all(|&r| r <= tol);
    if !converged {
        let bad = residuals.iter().filter(|&&r| r > tol).count();
        return Err(Error::RootsNotConverged {
            iterations,
            converged: roots.len() - bad,
            degree: f.degree(),
            partial: roots
                .iter()
                .map(|z| {
                    (
                        z.re.to_f64().unwrap_or(f64::NAN),
                        z.im.to_f64().unwrap_or(f64::NAN),
                    )
                })
                .collect(),
        });
    }
    Ok(RootSet {
        roots,
        residuals,
        step_estimates,
        degree: f.degree(),
        converged,
        iterations,
    })
}

/// Perturbed-circle initial points: radius at the geometric mean of the
/// Cauchy root bounds, angles uniformly spread with deterministic jitter
/// from a fixed seed. Reproducibility over speed.
fn initial_guesses<F: Real>(f: &SignedPoly) -> Vec<Complex<F>> {
    let c = f.coeffs();
    let degree = f.degree();
    let lead = (c[degree] as i64).abs();
    let max_head = c[..degree]
        .iter()
        .map(|&x| (x as i64).abs())
        .max()
        .unwrap_or(0);
    let max_tail = c[1..]
        .iter()
        .map(|&x| (x as i64).abs())
        .max()
        .unwrap_or(0);
    let r_max = 1.0 + max_head as f64 / lead as f64;
    let c0 = (c[0] as i64).abs() as f64;
    let r_min = c0 / (c0 + max_tail as f64);
    let radius = (r_max * r_min).sqrt();

    let mut state = INITIAL_SEED ^ (degree as u64).rotate_left(17);
    let two_pi = fr::<F>(std::f64::consts::TAU);
    (0..degree)
        .map(|i| {
            state = splitmix64(state);
            let u = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            state = splitmix64(state);
            let v = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            let angle = two_pi * (fu::<F>(i) + fr::<F>(0.37 + 0.2 * u)) / fu::<F>(degree);
            let r = fr::<F>(radius * (1.0 + 0.08 * v));
            let (s, cos) = angle.sin_cos();
            Complex::new(r * cos, r * s)
        })
        .collect()
}

/// Jacobi-style sweeps: every correction is computed from the previous
/// iterate vector, the per-root sums run in a fixed order, and the sweep is
/// parallel over roots — output is identical for any thread count. All
/// iterates keep moving every sweep (converged ones take vanishing steps);
/// the pairwise repulsion is what keeps two iterates off the same root.
fn aberth_sweeps<F: Real>(eval: &TwoSidedEval<F>, z: &mut Vec<Complex<F>>, tol: F) -> usize {
    let degree = z.len();
    let one = Complex::new(F::one(), F::zero());
    let tiny = F::epsilon() * F::epsilon();
    for sweep in 0..MAX_SWEEPS {
        let snapshot: &[Complex<F>] = z;
        let updates: Vec<(Complex<F>, bool)> = (0..degree)
            .into_par_iter()
            .map(|i| {
                let zi = snapshot[i];
                let w = match eval.newton_step(zi) {
                    Some(w) if w.re.is_finite() && w.im.is_finite() => w,
                    // stationary point or non-finite arithmetic: contract
                    // toward the circle and carry on
                    _ => return (zi * fr::<F>(0.97), false),
                };
                let done = w.norm() <= tol;
                let mut sum = Complex::new(F::zero(), F::zero());
                for (j, &zj) in snapshot.iter().enumerate() {
                    if j != i {
                        let d = zi - zj;
                        if d.norm_sqr() > tiny {
                            sum += d.inv();
                        }
                    }
                }
                let denom = one - w * sum;
                let step = if denom.norm_sqr() > tiny { w / denom } else { w };
                // keep steps finite through near-singular configurations
                let cap = fr::<F>(0.5) * (F::one() + zi.norm());
                let sn = step.norm();
                let step = if sn > cap { step * (cap / sn) } else { step };
                (zi - step, done)
            })
            .collect();
        if updates.iter().all(|&(_, done)| done) {
            return sweep + 1;
        }
        *z = updates.into_iter().map(|(zi, _)| zi).collect();
    }
    MAX_SWEEPS
}

/// Collapse clusters tighter than ~1e-7 to their centroid. A double root
/// leaves Aberth with two iterates straddling it at O(sqrt(eps)); the
/// centroid cancels the straddle to first order. Simple-root spacings in
/// this problem family are orders of magnitude wider.
fn cluster_smooth<F: Real>(roots: &mut [Complex<F>]) {
    let n = roots.len();
    if n < 2 {
        return;
    }
    let radius = fr::<F>(1e-7);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        roots[a]
            .re
            .partial_cmp(&roots[b].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut group = vec![usize::MAX; n];
    let mut n_groups = 0usize;
    for (rank, &i) in order.iter().enumerate() {
        if group[i] != usize::MAX {
            continue;
        }
        group[i] = n_groups;
        let scale = radius * (F::one() + roots[i].norm());
        for &j in order.iter().skip(rank + 1) {
            if roots[j].re - roots[i].re > scale {
                break;
            }
            if group[j] == usize::MAX && (roots[j] - roots[i]).norm() <= scale {
                group[j] = n_groups;
            }
        }
        n_groups += 1;
    }
    let mut sums = vec![Complex::new(F::zero(), F::zero()); n_groups];
    let mut counts = vec![0usize; n_groups];
    for i in 0..n {
        sums[group[i]] += roots[i];
        counts[group[i]] += 1;
    }
    for i in 0..n {
        let g = group[i];
        if counts[g] > 1 {
            roots[i] = sums[g] / fu::<F>(counts[g]);
        }
    }
}

/// A few plain Newton steps for iterates whose certified residual misses
/// the target (double roots converge linearly in the simultaneous phase).
fn polish_stragglers<F: Real>(eval: &TwoSidedEval<F>, roots: &mut [Complex<F>], tol: F) {
    roots.par_iter_mut().for_each(|z| {
        if eval.certified_residual(*z) <= tol {
            return;
        }
        for _ in 0..32 {
            match eval.newton_step(*z) {
                Some(w) if w.re.is_finite() && w.im.is_finite() => {
                    *z = *z - w;
                    if w.norm() <= tol * fr(0.01) {
                        break;
                    }
                }
                _ => break,
            }
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_point;
    use crate::poly::{fekete, rudin_shapiro};

    #[test]
    fn linear_polynomials() {
        let f = SignedPoly::new(vec![1, 1]).unwrap();
        let r = find_roots::<f64>(&f, None).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - Complex::new(-1.0, 0.0)).norm() < 1e-12);

        let q1 = SignedPoly::new(vec![1, -1]).unwrap();
        let r = find_roots::<f64>(&q1, None).unwrap();
        assert!((r.roots[0] - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fekete5_with_origin_deflation_and_double_root() {
        let f = fekete(5).unwrap().poly;
        let r = find_roots::<f64>(&f, None).unwrap();
        assert_eq!(r.roots.len(), 4);
        assert!(r.converged);
        let mut at_zero = 0;
        let mut at_one = 0;
        let mut at_minus_one = 0;
        for z in &r.roots {
            if z.norm() < 1e-12 {
                at_zero += 1;
            } else if (z - Complex::new(1.0, 0.0)).norm() < 1e-5 {
                at_one += 1;
            } else if (z - Complex::new(-1.0, 0.0)).norm() < 1e-8 {
                at_minus_one += 1;
            }
        }
        assert_eq!((at_zero, at_one, at_minus_one), (1, 2, 1));
    }

    #[test]
    fn residuals_certified_for_rudin_shapiro() {
        for k in [4u32, 8] {
            let pair = rudin_shapiro(k).unwrap();
            let tol = 1e-10 * (pair.n as f64).sqrt();
            let r = find_roots::<f64>(&pair.p, None).unwrap();
            assert_eq!(r.roots.len(), pair.n - 1);
            assert!(r.converged);
            assert!(r.max_residual() <= tol, "k={k}: {}", r.max_residual());
            // independent recheck through the oracle on the roots where the
            // raw value is meaningful
            for z in &r.roots {
                if z.norm() <= 1.0 {
                    assert!(eval_point(&pair.p, *z).norm() <= 1e-6);
                }
            }
        }
    }

    #[test]
    fn degree_cap_enforced() {
        let pair = rudin_shapiro(4).unwrap();
        assert!(matches!(
            find_roots_with_cap::<f64>(&pair.p, None, 8),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn deterministic_across_runs() {
        let pair = rudin_shapiro(6).unwrap();
        let a = find_roots::<f64>(&pair.p, None).unwrap();
        let b = find_roots::<f64>(&pair.p, None).unwrap();
        for (x, y) in a.roots.iter().zip(&b.roots) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn inverted_union_doubles_nonzero_roots() {
        let f = fekete(5).unwrap().poly;
        let r = find_roots::<f64>(&f, None).unwrap();
        let u = r.inverted_union();
        assert_eq!(u.roots.len(), 7); // 4 + 3 nonzero reflections
    }

    #[test]
    fn far_outside_roots_are_found() {
        // P_2 = 1 + z + z^2 - z^3 has its real root near 1.8393 (the
        // tribonacci constant), well outside the unit circle
        let pair = rudin_shapiro(2).unwrap();
        let r = find_roots::<f64>(&pair.p, None).unwrap();
        let far = r
            .roots
            .iter()
            .find(|z| z.im.abs() < 1e-10 && z.re > 1.5)
            .expect("real root outside the circle");
        assert!((far.re - 1.839_286_755_214_161).abs() < 1e-9);
    }
}
