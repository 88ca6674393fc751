//! Evaluation engine: polynomials on unit-circle grids (zero-padded FFT),
//! compensated Horner at arbitrary points (the oracle for everything else),
//! squared-modulus cosine polynomials via exact integer autocorrelation, and
//! an O(k) recursion evaluator for Rudin-Shapiro values at single angles.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft::{Direction, Fft};
use crate::num::{fi, fr, fu, KahanSum, Real};
use crate::poly::{RudinShapiroPair, SignedPoly};

/// Values of a polynomial at the N-th roots of unity:
/// `values[m] = f(e^{2*pi*i*m/N})`.
#[derive(Clone, Debug)]
pub struct GridSamples<F> {
    pub n_grid: usize,
    pub values: Vec<Complex<F>>,
    pub source_degree: usize,
}

impl<F: Real> GridSamples<F> {
    /// Kahan mean of |values|^2. For N > degree this equals the coefficient
    /// square sum exactly up to rounding (Parseval).
    pub fn mean_square(&self) -> F {
        let mut acc = KahanSum::new();
        for v in &self.values {
            acc.add(v.norm_sqr());
        }
        acc.value() / fu(self.n_grid)
    }

    /// Index of the sample with the largest modulus.
    pub fn argmax_modulus(&self) -> usize {
        let mut best = 0usize;
        let mut best_v = F::neg_infinity();
        for (i, v) in self.values.iter().enumerate() {
            let m = v.norm_sqr();
            if m > best_v {
                best_v = m;
                best = i;
            }
        }
        best
    }

    pub fn angle_of(&self, index: usize) -> F {
        two_pi::<F>() * fu(index) / fu(self.n_grid)
    }
}

#[inline]
pub(crate) fn two_pi<F: Real>() -> F {
    F::PI() + F::PI()
}

// ---------------------------------------------------------------------------
// Compensated Horner
// ---------------------------------------------------------------------------

#[inline]
fn two_sum<F: Real>(a: F, b: F) -> (F, F) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod<F: Real>(a: F, b: F) -> (F, F) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Complex product with a first-order error term.
#[inline]
fn two_prod_complex<F: Real>(x: Complex<F>, y: Complex<F>) -> (Complex<F>, Complex<F>) {
    let (p1, e1) = two_prod(x.re, y.re);
    let (p2, e2) = two_prod(x.im, y.im);
    let (p3, e3) = two_prod(x.re, y.im);
    let (p4, e4) = two_prod(x.im, y.re);
    let (re, e5) = two_sum(p1, -p2);
    let (im, e6) = two_sum(p3, p4);
    (
        Complex::new(re, im),
        Complex::new(e1 - e2 + e5, e3 + e4 + e6),
    )
}

/// Horner evaluation with compensated products and sums. Serves as the
/// oracle for grid evaluation and for root residual certification.
pub fn eval_point<F: Real>(f: &SignedPoly, z: Complex<F>) -> Complex<F> {
    horner_compensated(f.coeffs().iter().rev().map(|&c| fi::<F>(c as i64)), z)
}

/// Compensated Horner over arbitrary real coefficients (descending order
/// iterator). Shared with the deflated-integer path in the norms module.
pub(crate) fn horner_compensated<F: Real, I>(coeffs_desc: I, z: Complex<F>) -> Complex<F>
where
    I: Iterator<Item = F>,
{
    let mut s = Complex::new(F::zero(), F::zero());
    let mut err = Complex::new(F::zero(), F::zero());
    for c in coeffs_desc {
        let (t, terr) = two_prod_complex(s, z);
        let (re, e_re) = two_sum(t.re, c);
        let s_next = Complex::new(re, t.im);
        err = err * z + (terr + Complex::new(e_re, F::zero()));
        s = s_next;
    }
    s + err
}

/// Plain (uncompensated) Horner. Bisection refinement uses this: the
/// rounding floor eps * sum|c_j| sits far below the value swing across any
/// bracket the grid scan produces.
pub fn eval_point_fast<F: Real>(f: &SignedPoly, z: Complex<F>) -> Complex<F> {
    let mut s = Complex::new(F::zero(), F::zero());
    for &c in f.coeffs().iter().rev() {
        s = s * z + Complex::new(fi(c as i64), F::zero());
    }
    s
}

/// Plain Horner returning (f(z), f'(z)); the root finder's inner loop.
#[inline]
pub(crate) fn horner_with_derivative<F: Real>(
    coeffs_desc: &[Complex<F>],
    z: Complex<F>,
) -> (Complex<F>, Complex<F>) {
    let mut s = Complex::new(F::zero(), F::zero());
    let mut d = Complex::new(F::zero(), F::zero());
    for &c in coeffs_desc {
        d = d * z + s;
        s = s * z + c;
    }
    (s, d)
}

// ---------------------------------------------------------------------------
// Grid evaluation
// ---------------------------------------------------------------------------

/// Evaluate `f` at all N-th roots of unity by zero-padded FFT, then verify
/// 64 deterministically chosen samples against the Horner oracle.
pub fn eval_grid<F: Real>(f: &SignedPoly, n_grid: usize) -> Result<GridSamples<F>> {
    let coeffs: Vec<F> = f.coeffs().iter().map(|&c| fi(c as i64)).collect();
    let values = eval_grid_real_coeffs(&coeffs, n_grid)?;
    let samples = GridSamples {
        n_grid,
        values,
        source_degree: f.degree(),
    };
    spot_check(f, &samples)?;
    Ok(samples)
}

/// FFT grid evaluation of an arbitrary real-coefficient polynomial
/// (ascending coefficients). No spot check; used by the deflated Mahler path.
pub(crate) fn eval_grid_real_coeffs<F: Real>(
    coeffs: &[F],
    n_grid: usize,
) -> Result<Vec<Complex<F>>> {
    if !n_grid.is_power_of_two() {
        return Err(Error::GridNotPowerOfTwo { n_grid });
    }
    if n_grid < coeffs.len() {
        return Err(Error::GridTooSmall {
            n_grid,
            required: coeffs.len(),
        });
    }
    let mut buf: Vec<Complex<F>> = coeffs
        .iter()
        .map(|&c| Complex::new(c, F::zero()))
        .collect();
    buf.resize(n_grid, Complex::new(F::zero(), F::zero()));
    Fft::new(n_grid)?.transform(&mut buf, Direction::Inverse);
    Ok(buf)
}

fn spot_check<F: Real>(f: &SignedPoly, samples: &GridSamples<F>) -> Result<()> {
    let n_grid = samples.n_grid;
    let mut state = (n_grid as u64)
        .wrapping_mul(0x9E3779B97F4A7C15)
        .wrapping_add(f.degree() as u64);
    let mut max_dev = F::zero();
    for _ in 0..64 {
        state = splitmix64(state);
        let m = (state % n_grid as u64) as usize;
        let angle = samples.angle_of(m);
        let (s, c) = angle.sin_cos();
        let oracle = eval_point(f, Complex::new(c, s));
        let dev = (samples.values[m] - oracle).norm();
        if dev > max_dev {
            max_dev = dev;
        }
    }
    // the oracle evaluates at sin_cos(2 pi m / N), which differs from the
    // exact root of unity by ~eps; the comparison therefore sees an extra
    // |f'| * eps term, so the tolerance is 1e-9 * (deg + 1) at f64 scale
    let tol = F::epsilon() * fu::<F>(f.degree() + 1) * fr::<F>(4.5e6);
    if max_dev > tol {
        return Err(Error::Verification {
            what: "fft grid evaluation vs horner oracle",
            deviation: max_dev.to_f64().unwrap_or(f64::NAN),
            tolerance: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Cosine polynomials (squared moduli live here)
// ---------------------------------------------------------------------------

/// Real trigonometric polynomial R(t) = a_0 + 2 * sum_{j>=1} a_j cos(jt).
/// Built from a Littlewood polynomial of length n it satisfies a_0 = n with
/// all a_j integers (the aperiodic autocorrelations of the sign sequence).
#[derive(Clone, Debug)]
pub struct CosinePoly<F> {
    a: Vec<F>,
}

impl<F: Real> CosinePoly<F> {
    pub fn new(mut a: Vec<F>) -> Self {
        while a.len() > 1 && a.last() == Some(&F::zero()) {
            a.pop();
        }
        assert!(!a.is_empty(), "empty cosine polynomial");
        CosinePoly { a }
    }

    pub fn from_autocorr(ac: &[i64]) -> Self {
        CosinePoly::new(ac.iter().map(|&v| fi(v)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.a
    }

    pub fn trig_degree(&self) -> usize {
        self.a.len() - 1
    }

    /// Clenshaw evaluation of a_0 + 2 sum a_j cos(jt).
    pub fn eval(&self, t: F) -> F {
        let c = t.cos();
        let two_c = c + c;
        let m = self.a.len() - 1;
        let mut u1 = F::zero();
        let mut u2 = F::zero();
        let two = fr::<F>(2.0);
        for j in (1..=m).rev() {
            let beta = two * self.a[j];
            let u = beta + two_c * u1 - u2;
            u2 = u1;
            u1 = u;
        }
        self.a[0] + c * u1 - u2
    }

    /// Termwise derivative -2 sum_{j>=1} j a_j sin(jt), by Clenshaw on the
    /// sine series.
    pub fn derivative_at(&self, t: F) -> F {
        let c = t.cos();
        let two_c = c + c;
        let m = self.a.len() - 1;
        let mut u1 = F::zero();
        let mut u2 = F::zero();
        let neg_two = fr::<F>(-2.0);
        for j in (1..=m).rev() {
            let gamma = neg_two * fu::<F>(j) * self.a[j];
            let u = gamma + two_c * u1 - u2;
            u2 = u1;
            u1 = u;
        }
        t.sin() * u1
    }

    /// Values R(2*pi*m/N) for m = 0..N-1, via one FFT of the Hermitian
    /// coefficient extension.
    pub fn grid_values(&self, n_grid: usize) -> Result<Vec<F>> {
        self.hermitian_grid(n_grid, |j, aj| {
            if j == 0 {
                (Complex::new(aj, F::zero()), Complex::new(aj, F::zero()))
            } else {
                (Complex::new(aj, F::zero()), Complex::new(aj, F::zero()))
            }
        })
    }

    /// Values R'(2*pi*m/N) for m = 0..N-1.
    pub fn derivative_grid_values(&self, n_grid: usize) -> Result<Vec<F>> {
        self.hermitian_grid(n_grid, |j, aj| {
            let jf = fu::<F>(j);
            (
                Complex::new(F::zero(), jf * aj),
                Complex::new(F::zero(), -(jf * aj)),
            )
        })
    }

    fn hermitian_grid(
        &self,
        n_grid: usize,
        term: impl Fn(usize, F) -> (Complex<F>, Complex<F>),
    ) -> Result<Vec<F>> {
        if !n_grid.is_power_of_two() {
            return Err(Error::GridNotPowerOfTwo { n_grid });
        }
        if n_grid < 2 * self.a.len() {
            return Err(Error::GridTooSmall {
                n_grid,
                required: 2 * self.a.len(),
            });
        }
        let mut buf = vec![Complex::new(F::zero(), F::zero()); n_grid];
        let (pos0, _) = term(0, self.a[0]);
        buf[0] = pos0;
        for j in 1..self.a.len() {
            let (pos, neg) = term(j, self.a[j]);
            buf[j] = pos;
            buf[n_grid - j] = neg;
        }
        Fft::new(n_grid)?.transform(&mut buf, Direction::Inverse);
        Ok(buf.into_iter().map(|v| v.re).collect())
    }
}

/// Free-function form of the termwise derivative (cross-checked against
/// central differences in the tests).
pub fn derivative_values<F: Real>(r: &CosinePoly<F>, t: F) -> F {
    r.derivative_at(t)
}

// ---------------------------------------------------------------------------
// Autocorrelation / squared modulus
// ---------------------------------------------------------------------------

/// Exact integer aperiodic autocorrelations a_j = sum_m c_m c_{m+j},
/// j = 0..n-1, via an FFT of size >= 2n rounded back to integers. The
/// rounding slack is checked and must be far below 1/2.
pub fn autocorr_int(f: &SignedPoly) -> Result<Vec<i64>> {
    let n = f.len();
    let l = (2 * n - 1).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = f
        .coeffs()
        .iter()
        .map(|&c| Complex::new(c as f64, 0.0))
        .collect();
    buf.resize(l, Complex::new(0.0, 0.0));
    let plan = Fft::new(l)?;
    plan.transform(&mut buf, Direction::Forward);
    for v in buf.iter_mut() {
        *v = Complex::new(v.norm_sqr(), 0.0);
    }
    plan.transform(&mut buf, Direction::Inverse);
    let scale = 1.0 / l as f64;
    let mut out = Vec::with_capacity(n);
    let mut worst = 0.0f64;
    for item in buf.iter().take(n) {
        let x = item.re * scale;
        let r = x.round();
        worst = worst.max((x - r).abs());
        out.push(r as i64);
    }
    if worst > 0.25 {
        return Err(Error::Verification {
            what: "autocorrelation integer rounding",
            deviation: worst,
            tolerance: 0.25,
        });
    }
    Ok(out)
}

/// O(n^2) direct convolution; the oracle for `autocorr_int` below degree 2^12.
pub fn autocorr_int_direct(f: &SignedPoly) -> Vec<i64> {
    let c = f.coeffs();
    let n = c.len();
    (0..n)
        .map(|j| {
            (0..n - j)
                .map(|m| (c[m] as i64) * (c[m + j] as i64))
                .sum()
        })
        .collect()
}

/// |f(e^{it})|^2 as a cosine polynomial with exact integer coefficients.
pub fn modulus_squared<F: Real>(f: &SignedPoly) -> Result<CosinePoly<F>> {
    Ok(CosinePoly::from_autocorr(&autocorr_int(f)?))
}

// ---------------------------------------------------------------------------
// Rudin-Shapiro fast point evaluation
// ---------------------------------------------------------------------------

/// Which member of a Rudin-Shapiro pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RsMember {
    P,
    Q,
}

/// O(k) evaluation of (P_k, Q_k) at a point of the unit circle through the
/// defining recursion, squaring w = z^{2^j} level by level (renormalized to
/// the circle each step so phase error stays at a few ulps).
pub fn rudin_shapiro_eval<F: Real>(k: u32, t: F) -> (Complex<F>, Complex<F>) {
    let (s, c) = t.sin_cos();
    let mut w = Complex::new(c, s);
    let mut p = Complex::new(F::one(), F::zero());
    let mut q = Complex::new(F::one(), F::zero());
    for _ in 0..k {
        let wq = w * q;
        let np = p + wq;
        let nq = p - wq;
        p = np;
        q = nq;
        w = w * w;
        let norm = w.norm();
        if norm > F::zero() {
            w = w / norm;
        }
    }
    (p, q)
}

// ---------------------------------------------------------------------------
// Real trigonometric curves (crossing / sublevel substrate)
// ---------------------------------------------------------------------------

/// A real 2*pi-periodic trigonometric polynomial that can be sampled on
/// power-of-two grids and evaluated at single angles. The degree bound feeds
/// the 2*(degree) cap on zero counts per period.
pub trait TrigCurve<F: Real>: Sync {
    fn trig_degree(&self) -> usize;
    fn value(&self, t: F) -> F;
    fn grid_values(&self, n_grid: usize) -> Result<Vec<F>>;
}

impl<F: Real> TrigCurve<F> for CosinePoly<F> {
    fn trig_degree(&self) -> usize {
        CosinePoly::trig_degree(self)
    }

    fn value(&self, t: F) -> F {
        self.eval(t)
    }

    fn grid_values(&self, n_grid: usize) -> Result<Vec<F>> {
        CosinePoly::grid_values(self, n_grid)
    }
}

/// R_k(t) = |P_k(e^{it})|^2 (or the Q_k version) exposed as a curve: grid
/// values come from one FFT of the sign sequence, single angles from the
/// O(k) recursion evaluator. At generation 18 a bisection step costs ~500
/// flops instead of an O(n) Clenshaw pass.
pub struct RudinShapiroCurve {
    k: u32,
    member: RsMember,
    poly: SignedPoly,
}

impl RudinShapiroCurve {
    pub fn new(pair: &RudinShapiroPair, member: RsMember) -> Self {
        let poly = match member {
            RsMember::P => pair.p.clone(),
            RsMember::Q => pair.q.clone(),
        };
        RudinShapiroCurve {
            k: pair.k,
            member,
            poly,
        }
    }

    pub fn scale_n(&self) -> usize {
        1usize << self.k
    }
}

impl<F: Real> TrigCurve<F> for RudinShapiroCurve {
    fn trig_degree(&self) -> usize {
        (1usize << self.k) - 1
    }

    fn value(&self, t: F) -> F {
        let (p, q) = rudin_shapiro_eval::<F>(self.k, t);
        match self.member {
            RsMember::P => p.norm_sqr(),
            RsMember::Q => q.norm_sqr(),
        }
    }

    fn grid_values(&self, n_grid: usize) -> Result<Vec<F>> {
        let samples: GridSamples<F> = eval_grid(&self.poly, n_grid)?;
        Ok(samples.values.iter().map(|v| v.norm_sqr()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{fekete, rudin_shapiro};
    use proptest::prelude::*;

    fn unit(t: f64) -> Complex<f64> {
        Complex::from_polar(1.0, t)
    }

    #[test]
    fn eval_grid_example_n4() {
        let f = SignedPoly::new(vec![1, 1]).unwrap();
        let g: GridSamples<f64> = eval_grid(&f, 4).unwrap();
        let expect = [
            Complex::new(2.0, 0.0),
            Complex::new(1.0, 1.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, -1.0),
        ];
        for (v, e) in g.values.iter().zip(&expect) {
            assert!((v - e).norm() < 1e-14);
        }
    }

    #[test]
    fn eval_grid_fekete3_at_minus_one() {
        let f = fekete(3).unwrap().poly;
        let g: GridSamples<f64> = eval_grid(&f, 4).unwrap();
        assert!((g.values[2] - Complex::new(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eval_grid_parseval_rudin_shapiro() {
        for k in [1u32, 4, 8, 12] {
            let pair = rudin_shapiro(k).unwrap();
            let n = pair.n;
            let g: GridSamples<f64> = eval_grid(&pair.p, 4 * n).unwrap();
            let mean = g.mean_square();
            assert!(
                (mean - n as f64).abs() <= 1e-10 * n as f64,
                "k={k}: mean |values|^2 = {mean}"
            );
        }
    }

    #[test]
    fn eval_grid_domain_errors() {
        let f = SignedPoly::new(vec![1, 1, 1]).unwrap();
        assert!(matches!(
            eval_grid::<f64>(&f, 6),
            Err(Error::GridNotPowerOfTwo { .. })
        ));
        assert!(matches!(
            eval_grid::<f64>(&f, 2),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn eval_point_examples() {
        let pair1 = rudin_shapiro(1).unwrap();
        let v = eval_point(&pair1.p, Complex::new(-1.0f64, 0.0));
        assert!(v.norm() < 1e-15);
        let v = eval_point(&pair1.q, Complex::new(1.0f64, 0.0));
        assert!(v.norm() < 1e-15);
        let pair2 = rudin_shapiro(2).unwrap();
        let v = eval_point(&pair2.p, Complex::new(1.0f64, 0.0));
        assert!((v - Complex::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn modulus_squared_examples() {
        let pair1 = rudin_shapiro(1).unwrap();
        let r: CosinePoly<f64> = modulus_squared(&pair1.p).unwrap();
        assert_eq!(r.coeffs(), &[2.0, 1.0]);

        let pair2 = rudin_shapiro(2).unwrap();
        let r: CosinePoly<f64> = modulus_squared(&pair2.p).unwrap();
        assert_eq!(r.coeffs(), &[4.0, 1.0, 0.0, -1.0]);
    }

    #[test]
    fn autocorr_fft_equals_direct_oracle() {
        for k in 1..=10u32 {
            let pair = rudin_shapiro(k).unwrap();
            assert_eq!(
                autocorr_int(&pair.p).unwrap(),
                autocorr_int_direct(&pair.p),
                "k={k}"
            );
        }
        let f7 = fekete(7).unwrap().poly;
        assert_eq!(autocorr_int(&f7).unwrap(), autocorr_int_direct(&f7));
    }

    #[test]
    fn littlewood_autocorr_a0_is_n() {
        for k in 1..=8u32 {
            let pair = rudin_shapiro(k).unwrap();
            let a = autocorr_int(&pair.p).unwrap();
            assert_eq!(a[0], pair.n as i64);
        }
    }

    #[test]
    fn cosine_eval_matches_naive_sum() {
        let a = vec![4.0f64, 1.0, 0.0, -1.0, 0.5, -0.25];
        let r = CosinePoly::new(a.clone());
        for i in 0..17 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 17.0;
            let naive: f64 = a[0]
                + 2.0
                    * a.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, &aj)| aj * (j as f64 * t).cos())
                        .sum::<f64>();
            assert!((r.eval(t) - naive).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn cosine_derivative_examples_and_finite_differences() {
        let pair1 = rudin_shapiro(1).unwrap();
        let r1: CosinePoly<f64> = modulus_squared(&pair1.p).unwrap();
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!((derivative_values(&r1, half_pi) + 2.0).abs() < 1e-12);
        assert!(derivative_values(&r1, 0.0).abs() < 1e-12);

        let pair2 = rudin_shapiro(2).unwrap();
        let r2: CosinePoly<f64> = modulus_squared(&pair2.p).unwrap();
        assert!((derivative_values(&r2, half_pi) + 8.0).abs() < 1e-12);

        // central differences
        let h = 1e-6;
        for i in 0..9 {
            let t = 0.3 + i as f64 * 0.61;
            let fd = (r2.eval(t + h) - r2.eval(t - h)) / (2.0 * h);
            assert!((derivative_values(&r2, t) - fd).abs() < 1e-5, "t={t}");
        }
    }

    #[test]
    fn cosine_grid_matches_squared_grid_samples() {
        for k in [3u32, 6, 9] {
            let pair = rudin_shapiro(k).unwrap();
            let r: CosinePoly<f64> = modulus_squared(&pair.p).unwrap();
            let n_grid = 8 * pair.n;
            let rv = r.grid_values(n_grid).unwrap();
            let g: GridSamples<f64> = eval_grid(&pair.p, n_grid).unwrap();
            for (m, (a, v)) in rv.iter().zip(&g.values).enumerate() {
                assert!(
                    (a - v.norm_sqr()).abs() < 1e-9 * pair.n as f64,
                    "k={k} m={m}"
                );
            }
        }
    }

    #[test]
    fn parallelogram_identity_on_grid() {
        // |P_k|^2 + |Q_k|^2 = 2^{k+1} pointwise
        for k in [1u32, 5, 10] {
            let pair = rudin_shapiro(k).unwrap();
            let n_grid = 4 * pair.n;
            let gp: GridSamples<f64> = eval_grid(&pair.p, n_grid).unwrap();
            let gq: GridSamples<f64> = eval_grid(&pair.q, n_grid).unwrap();
            let target = 2.0 * pair.n as f64;
            for (p, q) in gp.values.iter().zip(&gq.values) {
                assert!((p.norm_sqr() + q.norm_sqr() - target).abs() < 1e-9 * target);
            }
        }
    }

    #[test]
    fn mirror_identity_on_grid() {
        // |Q_k(-z)| = |P_k(z)| pointwise on even grids
        for k in [2u32, 7] {
            let pair = rudin_shapiro(k).unwrap();
            let n_grid = 4 * pair.n;
            let gp: GridSamples<f64> = eval_grid(&pair.p, n_grid).unwrap();
            let gq: GridSamples<f64> = eval_grid(&pair.q, n_grid).unwrap();
            for m in 0..n_grid {
                let mirrored = (m + n_grid / 2) % n_grid;
                let dev = (gq.values[mirrored].norm() - gp.values[m].norm()).abs();
                assert!(dev < 1e-10 * (pair.n as f64).sqrt(), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn rudin_shapiro_eval_matches_horner() {
        for k in [0u32, 1, 3, 8, 12] {
            let pair = rudin_shapiro(k).unwrap();
            for i in 0..23 {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 23.0 + 0.01;
                let (p, q) = rudin_shapiro_eval::<f64>(k, t);
                let ph = eval_point(&pair.p, unit(t));
                let qh = eval_point(&pair.q, unit(t));
                let tol = 1e-11 * (pair.n as f64).sqrt().max(1.0);
                assert!((p - ph).norm() < tol, "k={k} t={t} P dev {}", (p - ph).norm());
                assert!((q - qh).norm() < tol, "k={k} t={t} Q dev {}", (q - qh).norm());
            }
        }
    }

    #[test]
    fn rs_curve_grid_and_point_agree() {
        let pair = rudin_shapiro(6).unwrap();
        let curve = RudinShapiroCurve::new(&pair, RsMember::P);
        let n_grid = 16 * pair.n;
        let gv: Vec<f64> = curve.grid_values(n_grid).unwrap();
        for m in (0..n_grid).step_by(37) {
            let t = 2.0 * std::f64::consts::PI * m as f64 / n_grid as f64;
            assert!((gv[m] - TrigCurve::<f64>::value(&curve, t)).abs() < 1e-8 * pair.n as f64);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn fft_grid_matches_horner_random_littlewood(
            seed in any::<u64>(),
            log_len in 1usize..9,
        ) {
            let len = 1usize << log_len;
            let mut state = seed;
            let coeffs: Vec<i8> = (0..len)
                .map(|_| {
                    state = splitmix64(state);
                    if state & 1 == 0 { 1 } else { -1 }
                })
                .collect();
            let f = SignedPoly::new(coeffs).unwrap();
            let n_grid = 4 * len;
            let g: GridSamples<f64> = eval_grid(&f, n_grid).unwrap();
            for _ in 0..8 {
                state = splitmix64(state);
                let m = (state % n_grid as u64) as usize;
                let oracle = eval_point(&f, unit(g.angle_of(m)));
                prop_assert!((g.values[m] - oracle).norm() <= 1e-9 * len as f64);
            }
        }

        #[test]
        fn autocorr_matches_direct_random(seed in any::<u64>(), len in 2usize..128) {
            let mut state = seed;
            let coeffs: Vec<i8> = (0..len)
                .map(|_| {
                    state = splitmix64(state);
                    match state % 3 {
                        0 => -1,
                        1 => 0,
                        _ => 1,
                    }
                })
                .collect();
            if let Ok(f) = SignedPoly::new(coeffs) {
                prop_assert_eq!(autocorr_int(&f).unwrap(), autocorr_int_direct(&f));
            }
        }
    }
}
