//! Level crossings, sublevel measures, and sign-change zero counting for
//! real trigonometric curves on the period. One scan engine drives all of
//! it: grid signs, bisection refinement of each bracket, zero-sample runs,
//! and an extremum probe that separates tangential contacts from crossing
//! pairs hiding inside one grid cell.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::{eval_grid, eval_point_fast, two_pi, GridSamples, TrigCurve};
use crate::norms::golden_section_max;
use crate::num::{fr, fu, KahanSum, Real};
use crate::poly::{FeketePoly, Reciprocity, SignedPoly};

/// Solutions of R(t) = eta * n on the period.
#[derive(Clone, Debug)]
pub struct CrossingReport<F> {
    pub eta: f64,
    pub level: F,
    pub n_scale: usize,
    pub n_grid: usize,
    /// Refined angles of sign-change solutions.
    pub transversal: Vec<F>,
    /// Even-order contacts, reported separately from the transversal count.
    pub tangent: Vec<F>,
}

impl<F> CrossingReport<F> {
    /// Transversal solution count (the capped quantity).
    pub fn count(&self) -> usize {
        self.transversal.len()
    }

    /// Distinct solutions: transversal crossings plus tangential contacts.
    pub fn distinct_solutions(&self) -> usize {
        self.transversal.len() + self.tangent.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReOrIm {
    Re,
    Im,
}

/// Wrap rule at the period seam.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Wrap {
    Periodic,
    /// g(t + 2pi) = -g(t); odd half-integer frequencies do this.
    AntiPeriodic,
}

struct ScanParams<F> {
    zero_eps: F,
    tangent_candidate: F,
    tangent_tol: F,
    angle_tol: F,
}

/// All zeros of a sampled 2pi-periodic (or anti-periodic) real function.
/// Returns (transversal angles, tangent angles), refined by bisection and
/// golden-section search. `values[m]` samples t = 2pi m / N.
fn scan_zeros<F: Real>(
    values: &[F],
    wrap: Wrap,
    g: &(impl Fn(F) -> F + Sync),
    params: &ScanParams<F>,
) -> (Vec<F>, Vec<F>) {
    let n = values.len();
    let step = two_pi::<F>() / fu(n);
    let sign_of = |v: F| -> i8 {
        if v.abs() <= params.zero_eps {
            0
        } else if v > F::zero() {
            1
        } else {
            -1
        }
    };

    // rotate so the scan starts at a nonzero sample; the wrap seam then
    // never splits a zero run
    let start = match values.iter().position(|&v| sign_of(v) != 0) {
        Some(s) => s,
        None => return (Vec::new(), Vec::new()), // identically zero within noise
    };
    let at = |m: usize| -> (F, F) {
        // extended sample m steps after `start`; angle may exceed 2pi
        let idx = start + m;
        let t = step * fu(idx);
        let mut v = values[idx % n];
        if wrap == Wrap::AntiPeriodic && idx >= n {
            v = -v;
        }
        (t, v)
    };
    let ext_sign = |m: usize| -> i8 {
        let (_, v) = at(m);
        sign_of(v)
    };

    enum Task<F> {
        Bracket(F, F, F), // lo, hi, value at lo
        NodeZero(F),
        Probe(F, F, i8), // lo, hi, flank sign
    }
    let mut tasks: Vec<Task<F>> = Vec::new();

    let mut m = 0usize;
    while m < n {
        let (t0, v0) = at(m);
        let s0 = sign_of(v0);
        debug_assert!(s0 != 0, "scan cursor must sit on a nonzero sample");
        // locate the next nonzero sample
        let mut j = m + 1;
        while ext_sign(j) == 0 {
            j += 1;
        }
        let (t1, v1) = at(j);
        let s1 = sign_of(v1);
        if j > m + 1 {
            // a run of zero samples: one zero of the function, transversal
            // when the flanks disagree
            let (ta, _) = at(m + 1);
            let (tb, _) = at(j - 1);
            if s0 != s1 {
                tasks.push(Task::Bracket(t0, t1, v0));
            } else {
                tasks.push(Task::NodeZero((ta + tb) / fr(2.0)));
            }
        } else if s0 != s1 {
            tasks.push(Task::Bracket(t0, t1, v0));
        } else {
            // uniform-sign window (m, m+1, m+2): probe the interior when the
            // middle sample is a local minimum dipping toward zero
            let (_, vc) = at(m + 1);
            let s2 = ext_sign(m + 2);
            if s2 == s0 && vc.abs() <= params.tangent_candidate {
                let (t2, v2) = at(m + 2);
                if vc.abs() <= v0.abs() && vc.abs() <= v2.abs() {
                    tasks.push(Task::Probe(t0, t2, s0));
                }
            }
        }
        m = j;
    }

    let results: Vec<(Vec<F>, Vec<F>)> = tasks
        .par_iter()
        .map(|task| {
            let mut trans = Vec::new();
            let mut tang = Vec::new();
            match *task {
                Task::Bracket(lo, hi, v_lo) => {
                    trans.push(bisect_zero(g, lo, hi, v_lo, params.angle_tol));
                }
                Task::NodeZero(t) => tang.push(t),
                Task::Probe(lo, hi, flank) => {
                    let sigma = fr::<F>(flank as f64);
                    let toward_zero = |t: F| -(sigma * g(t));
                    let (t_star, neg_min) =
                        golden_section_max(&toward_zero, lo, hi, params.angle_tol);
                    let h_star = -neg_min; // min of sigma * g on the cell
                    if h_star < -params.zero_eps {
                        // a crossing pair hidden inside one cell
                        trans.push(bisect_zero(g, lo, t_star, sigma * fr(1.0), params.angle_tol));
                        trans.push(bisect_zero(
                            g,
                            t_star,
                            hi,
                            -(sigma * fr(1.0)),
                            params.angle_tol,
                        ));
                    } else if h_star <= params.tangent_tol {
                        tang.push(t_star);
                    }
                }
            }
            (trans, tang)
        })
        .collect();

    let mut transversal = Vec::new();
    let mut tangent = Vec::new();
    let wrap_angle = two_pi::<F>();
    for (tr, tg) in results {
        for t in tr {
            transversal.push(if t >= wrap_angle { t - wrap_angle } else { t });
        }
        for t in tg {
            tangent.push(if t >= wrap_angle { t - wrap_angle } else { t });
        }
    }
    transversal.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    tangent.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    (transversal, tangent)
}

fn bisect_zero<F: Real>(g: &impl Fn(F) -> F, mut lo: F, mut hi: F, v_lo: F, angle_tol: F) -> F {
    let mut lo_positive = if v_lo != F::zero() {
        v_lo > F::zero()
    } else {
        g(lo) > F::zero()
    };
    while hi - lo > angle_tol {
        let mid = (lo + hi) / fr(2.0);
        let vm = g(mid);
        if vm == F::zero() {
            return mid;
        }
        if (vm > F::zero()) == lo_positive {
            lo = mid;
            lo_positive = vm > F::zero();
        } else {
            hi = mid;
        }
    }
    (lo + hi) / fr(2.0)
}

const ANGLE_TOL: f64 = 1e-12;

/// Samples this close to zero are treated as exact zeros. Two noise terms:
/// FFT evaluation error scales with the coefficient mass (~ degree), and
/// cancellation error scales with the value magnitude.
fn zero_noise_floor<F: Real>(trig_degree: usize, scale: F) -> F {
    F::epsilon() * (fu::<F>(64 * (trig_degree + 1)) + fr::<F>(256.0) * scale)
}

/// All solutions of R(t) = eta * n on [0, 2pi), located by grid sign changes
/// and refined by bisection. Transversal crossings and even-order contacts
/// are reported separately; the transversal count is checked against the
/// hard cap of 2 * degree zeros per period for a degree-bounded real
/// trigonometric polynomial.
pub fn level_crossings<F: Real, C: TrigCurve<F>>(
    curve: &C,
    eta: F,
    n_scale: usize,
    n_grid: usize,
) -> Result<CrossingReport<F>> {
    if eta <= F::zero() || eta >= fr(2.0) {
        return Err(Error::Domain(format!(
            "level eta must lie in (0, 2), got {}",
            eta.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let required = 16 * n_scale;
    if n_grid < required {
        return Err(Error::GridTooSmall {
            n_grid,
            required,
        });
    }
    let level = eta * fu(n_scale);
    let (transversal, tangent) = crossings_at_level(curve, level, n_grid)?;
    let cap = 2 * curve.trig_degree();
    if transversal.len() > cap {
        return Err(Error::Verification {
            what: "transversal crossing count exceeds the 2(n-1) zero cap",
            deviation: transversal.len() as f64,
            tolerance: cap as f64,
        });
    }
    Ok(CrossingReport {
        eta: eta.to_f64().unwrap_or(f64::NAN),
        level,
        n_scale,
        n_grid,
        transversal,
        tangent,
    })
}

fn crossings_at_level<F: Real, C: TrigCurve<F>>(
    curve: &C,
    level: F,
    n_grid: usize,
) -> Result<(Vec<F>, Vec<F>)> {
    let values = curve.grid_values(n_grid)?;
    let mut max_abs = F::zero();
    let mut shifted = Vec::with_capacity(values.len());
    for v in values {
        let d = v - level;
        if d.abs() > max_abs {
            max_abs = d.abs();
        }
        shifted.push(d);
    }
    let scale = level.abs() + max_abs;
    let params = ScanParams {
        zero_eps: zero_noise_floor(curve.trig_degree(), scale),
        tangent_candidate: fr::<F>(0.05) * scale,
        tangent_tol: fr::<F>(1e-11) * scale,
        angle_tol: fr(ANGLE_TOL),
    };
    let g = |t: F| curve.value(t) - level;
    Ok(scan_zeros(&shifted, Wrap::Periodic, &g, &params))
}

/// Lebesgue measure (radians out of 2pi) of {t : R(t) <= alpha * max R},
/// by grid counting with the boundary refined through the crossing engine.
pub fn sublevel_measure<F: Real, C: TrigCurve<F>>(
    curve: &C,
    alpha: F,
    n_grid: usize,
) -> Result<F> {
    if alpha <= F::zero() || alpha >= F::one() {
        return Err(Error::Domain(format!(
            "sublevel fraction alpha must lie in (0, 1), got {}",
            alpha.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let required = 16 * (curve.trig_degree() + 1);
    if n_grid < required {
        return Err(Error::GridTooSmall {
            n_grid,
            required,
        });
    }
    let values = curve.grid_values(n_grid)?;
    let mut best = 0usize;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let step = two_pi::<F>() / fu(n_grid);
    let center = step * fu(best);
    let value_fn = |t: F| curve.value(t);
    let (_, refined_max) =
        golden_section_max(&value_fn, center - step, center + step, fr(ANGLE_TOL));
    let max_r = refined_max.max(values[best]);
    let threshold = alpha * max_r;

    let (mut boundary, _) = crossings_at_level(curve, threshold, n_grid)?;
    if boundary.is_empty() {
        return Ok(if values[0] <= threshold {
            two_pi::<F>()
        } else {
            F::zero()
        });
    }
    boundary.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut acc = KahanSum::new();
    let m = boundary.len();
    for i in 0..m {
        let lo = boundary[i];
        let hi = if i + 1 < m {
            boundary[i + 1]
        } else {
            boundary[0] + two_pi::<F>()
        };
        let mid = (lo + hi) / fr(2.0);
        if curve.value(mid) <= threshold {
            acc.add(hi - lo);
        }
    }
    Ok(acc.value())
}

/// Transversal sign changes of Re f(e^{it}) or Im f(e^{it}) on the period.
pub fn realpart_zero_count<F: Real>(
    f: &SignedPoly,
    part: ReOrIm,
    n_grid: usize,
) -> Result<usize> {
    let required = 16 * (f.degree() + 1);
    if n_grid < required {
        return Err(Error::GridTooSmall {
            n_grid,
            required,
        });
    }
    let samples: GridSamples<F> = eval_grid(f, n_grid)?;
    let values: Vec<F> = samples
        .values
        .iter()
        .map(|v| match part {
            ReOrIm::Re => v.re,
            ReOrIm::Im => v.im,
        })
        .collect();
    let mut max_abs = F::zero();
    for &v in &values {
        if v.abs() > max_abs {
            max_abs = v.abs();
        }
    }
    let params = ScanParams {
        zero_eps: zero_noise_floor(f.degree(), max_abs),
        tangent_candidate: fr::<F>(0.05) * max_abs,
        tangent_tol: fr::<F>(1e-11) * max_abs,
        angle_tol: fr(ANGLE_TOL),
    };
    let g = |t: F| {
        let (s, c) = t.sin_cos();
        let v = eval_point_fast(f, Complex::new(c, s));
        match part {
            ReOrIm::Re => v.re,
            ReOrIm::Im => v.im,
        }
    };
    let (transversal, _) = scan_zeros(&values, Wrap::Periodic, &g, &params);
    let cap = 2 * f.degree().max(1);
    if transversal.len() > cap {
        return Err(Error::Verification {
            what: "real-part zero count exceeds the trig-degree cap",
            deviation: transversal.len() as f64,
            tolerance: cap as f64,
        });
    }
    Ok(transversal.len())
}

/// Unimodular zeros of a Fekete polynomial found through its reciprocity:
/// h(t) = e^{-ipt/2} f_p(e^{it}) is real (p = 1 mod 4) or purely imaginary
/// (p = 3 mod 4), so circle zeros of f_p are sign changes of the real
/// function g. Since p is odd, g is 2pi-anti-periodic.
#[derive(Clone, Debug)]
pub struct UnimodularCount<F> {
    pub p: u64,
    pub n_grid: usize,
    /// Sign-change zeros: a lower bound for the unimodular zero count,
    /// exact (up to even-order contacts) once n_grid >= 8p.
    pub transversal: Vec<F>,
    /// Even-order contacts (e.g. the forced double zero at z = 1 when
    /// p = 1 mod 4), flagged separately.
    pub tangent: Vec<F>,
}

impl<F> UnimodularCount<F> {
    pub fn count(&self) -> usize {
        self.transversal.len()
    }

    pub fn fraction(&self) -> f64 {
        self.transversal.len() as f64 / (self.p - 1) as f64
    }
}

pub fn unimodular_count_reciprocal<F: Real>(
    fekete: &FeketePoly,
    n_grid: usize,
) -> Result<UnimodularCount<F>> {
    let p = fekete.p;
    let required = 4 * p as usize;
    if n_grid < required {
        return Err(Error::GridTooSmall {
            n_grid,
            required,
        });
    }
    let samples: GridSamples<F> = eval_grid(&fekete.poly, n_grid)?;
    let take = |v: Complex<F>| match fekete.reciprocity {
        Reciprocity::SelfReciprocal => v.re,
        Reciprocity::AntiSelfReciprocal => v.im,
    };
    let half_p = fr::<F>(p as f64 / 2.0);
    let step = two_pi::<F>() / fu(n_grid);
    let mut values = Vec::with_capacity(n_grid);
    let mut max_abs = F::zero();
    for (m, v) in samples.values.iter().enumerate() {
        let phase = -half_p * step * fu(m);
        let (s, c) = phase.sin_cos();
        let g = take(v * Complex::new(c, s));
        if g.abs() > max_abs {
            max_abs = g.abs();
        }
        values.push(g);
    }
    let params = ScanParams {
        zero_eps: zero_noise_floor(p as usize, max_abs),
        tangent_candidate: fr::<F>(0.05) * max_abs,
        tangent_tol: fr::<F>(1e-11) * max_abs,
        angle_tol: fr(ANGLE_TOL),
    };
    let poly = &fekete.poly;
    let g = move |t: F| {
        let (s, c) = t.sin_cos();
        let v = eval_point_fast(poly, Complex::new(c, s));
        let phase = -half_p * t;
        let (ps, pc) = phase.sin_cos();
        take(v * Complex::new(pc, ps))
    };
    let (transversal, tangent) = scan_zeros(&values, Wrap::AntiPeriodic, &g, &params);
    Ok(UnimodularCount {
        p,
        n_grid,
        transversal,
        tangent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{modulus_squared, CosinePoly, RsMember, RudinShapiroCurve};
    use crate::poly::{fekete, rudin_shapiro};

    fn r_from_p1() -> CosinePoly<f64> {
        modulus_squared(&rudin_shapiro(1).unwrap().p).unwrap()
    }

    #[test]
    fn crossings_of_p1_at_eta_one() {
        let r = r_from_p1(); // 2 + 2 cos t
        let report = level_crossings(&r, 1.0, 2, 64).unwrap();
        assert_eq!(report.count(), 2);
        assert_eq!(report.tangent.len(), 0);
        let pi = std::f64::consts::PI;
        assert!((report.transversal[0] - pi / 2.0).abs() < 1e-10);
        assert!((report.transversal[1] - 3.0 * pi / 2.0).abs() < 1e-10);
    }

    #[test]
    fn tangency_at_the_maximum_level() {
        let r = r_from_p1();
        let report = level_crossings(&r, 2.0 - 1e-13, 2, 64).unwrap();
        assert_eq!(report.count(), 0, "no transversal crossings at eta -> 2-");
        assert_eq!(report.tangent.len(), 1);
        assert!(report.tangent[0] < 1e-6 || report.tangent[0] > std::f64::consts::TAU - 1e-6);
    }

    #[test]
    fn subgrid_crossing_pair_is_recovered() {
        let r = r_from_p1();
        // crossings at +-sqrt(eps)-ish around t = 0, far below grid spacing
        let report = level_crossings(&r, 2.0 - 1e-5, 2, 64).unwrap();
        assert_eq!(report.count(), 2);
        assert!(report.tangent.is_empty());
    }

    #[test]
    fn eta_domain_checks() {
        let r = r_from_p1();
        assert!(level_crossings(&r, 0.0, 2, 64).is_err());
        assert!(level_crossings(&r, 2.0, 2, 64).is_err());
        assert!(level_crossings(&r, 1.0, 2, 16).is_err());
    }

    #[test]
    fn generic_and_recursive_curves_agree() {
        let pair = rudin_shapiro(6).unwrap();
        let cosine: CosinePoly<f64> = modulus_squared(&pair.p).unwrap();
        let fast = RudinShapiroCurve::new(&pair, RsMember::P);
        for eta in [0.15f64, 0.5, 1.0, 1.7] {
            let a = level_crossings(&cosine, eta, pair.n, 16 * pair.n).unwrap();
            let b = level_crossings(&fast, eta, pair.n, 16 * pair.n).unwrap();
            assert_eq!(a.count(), b.count(), "eta={eta}");
            assert_eq!(a.tangent.len(), b.tangent.len(), "eta={eta}");
            for (x, y) in a.transversal.iter().zip(&b.transversal) {
                assert!((x - y).abs() < 1e-9, "eta={eta}");
            }
        }
    }

    #[test]
    fn sublevel_measure_examples() {
        let r = r_from_p1();
        let m = sublevel_measure(&r, 0.5, 64).unwrap();
        assert!((m - std::f64::consts::PI).abs() < 1e-9, "alpha=1/2: {m}");
        let m = sublevel_measure(&r, 0.999_999, 64).unwrap();
        assert!(m > std::f64::consts::TAU - 0.02, "alpha -> 1: {m}");
        assert!(sublevel_measure(&r, 1.5, 64).is_err());
    }

    #[test]
    fn realpart_sign_changes() {
        let f = SignedPoly::new(vec![1, 1]).unwrap();
        // Re(1 + e^{it}) = 1 + cos t: tangency at pi only
        assert_eq!(realpart_zero_count::<f64>(&f, ReOrIm::Re, 64).unwrap(), 0);
        // Im = sin t: two transversal zeros
        assert_eq!(realpart_zero_count::<f64>(&f, ReOrIm::Im, 64).unwrap(), 2);
    }

    #[test]
    fn unimodular_count_small_fekete() {
        let f3 = fekete(3).unwrap();
        let c3 = unimodular_count_reciprocal::<f64>(&f3, 32).unwrap();
        assert_eq!(c3.count(), 1, "f_3 = z - z^2 vanishes on the circle at 1");
        assert_eq!(c3.tangent.len(), 0);

        let f5 = fekete(5).unwrap();
        let c5 = unimodular_count_reciprocal::<f64>(&f5, 64).unwrap();
        assert_eq!(c5.count(), 1, "simple zero at -1");
        assert_eq!(c5.tangent.len(), 1, "double contact at +1");
        assert!(c5.tangent[0] < 1e-6 || c5.tangent[0] > std::f64::consts::TAU - 1e-6);
    }

    #[test]
    fn unimodular_count_grid_guard() {
        let f = fekete(101).unwrap();
        assert!(unimodular_count_reciprocal::<f64>(&f, 256).is_err());
    }

    #[test]
    fn crossing_count_within_cap_for_rs() {
        let pair = rudin_shapiro(8).unwrap();
        let curve = RudinShapiroCurve::new(&pair, RsMember::P);
        for eta in [0.1f64, 1.0, 1.9] {
            let rep = level_crossings(&curve, eta, pair.n, 16 * pair.n).unwrap();
            assert!(rep.count() <= 2 * (pair.n - 1));
        }
    }
}
