//! Scalar abstraction: the numeric kernels are generic over the float type.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating-point scalar the evaluation, norm, and zero-location kernels
/// are generic over. Implemented for `f32` and `f64`; the concrete aliases
/// at the crate root fix `f64`, which is what the shipped tolerances assume.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Lossy conversion from `f64`, for literals and tolerances.
#[inline]
pub fn fr<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 -> Real conversion")
}

/// Conversion from a count.
#[inline]
pub fn fu<F: Real>(n: usize) -> F {
    F::from_usize(n).expect("usize -> Real conversion")
}

/// Conversion from a signed integer.
#[inline]
pub fn fi<F: Real>(n: i64) -> F {
    F::from_i64(n).expect("i64 -> Real conversion")
}

/// Compensated (Kahan) accumulator. Grid reductions use it in a fixed
/// sequential order so results do not depend on the thread count.
#[derive(Clone, Copy, Debug)]
pub struct KahanSum<F> {
    sum: F,
    carry: F,
}

impl<F: Real> KahanSum<F> {
    pub fn new() -> Self {
        KahanSum {
            sum: F::zero(),
            carry: F::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: F) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> F {
        self.sum
    }
}

impl<F: Real> Default for KahanSum<F> {
    fn default() -> Self {
        Self::new()
    }
}

/// Kahan sum of a slice.
pub fn kahan_sum<F: Real>(xs: &[F]) -> F {
    let mut acc = KahanSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_adversarial_sum() {
        // 1 followed by many tiny values that a naive f64 sum drops entirely.
        let n = 1_000_000usize;
        let tiny = 1e-16f64;
        let mut xs = vec![tiny; n];
        xs.insert(0, 1.0);
        let exact = 1.0 + tiny * n as f64;
        let kahan = kahan_sum(&xs);
        assert!((kahan - exact).abs() < 1e-15);
    }
}
