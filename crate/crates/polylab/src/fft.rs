//! Radix-2 complex FFT. Power-of-two sizes only: one code path, bit-exact
//! reproducible results regardless of thread count.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::{fu, Real};

/// Transform kernel sign: `Forward` uses e^{-2*pi*i/n}, `Inverse` the
/// conjugate kernel. Neither direction scales; callers divide by n where
/// an actual inverse DFT is wanted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Planned FFT of a fixed power-of-two size with a precomputed twiddle table.
pub struct Fft<F> {
    n: usize,
    /// twiddles[j] = e^{-2*pi*i*j/n} for j in 0..n/2
    twiddles: Vec<Complex<F>>,
}

impl<F: Real> Fft<F> {
    pub fn new(n: usize) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::GridNotPowerOfTwo { n_grid: n });
        }
        let half = n / 2;
        let mut twiddles = Vec::with_capacity(half);
        let step = fr_two_pi::<F>() / fu::<F>(n);
        for j in 0..half {
            let angle = -step * fu::<F>(j);
            let (s, c) = angle.sin_cos();
            twiddles.push(Complex::new(c, s));
        }
        Ok(Fft { n, twiddles })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place transform. `data.len()` must equal the planned size.
    pub fn transform(&self, data: &mut [Complex<F>], dir: Direction) {
        assert_eq!(data.len(), self.n, "buffer does not match planned size");
        let n = self.n;
        if n <= 1 {
            return;
        }

        // bit-reversal permutation
        let shift = (usize::BITS - n.trailing_zeros()) % usize::BITS;
        for i in 0..n {
            let j = i.reverse_bits() >> shift;
            if j > i {
                data.swap(i, j);
            }
        }

        let conj = dir == Direction::Inverse;
        let mut len = 2usize;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for block in data.chunks_exact_mut(len) {
                let (lo, hi) = block.split_at_mut(half);
                for i in 0..half {
                    let mut w = self.twiddles[i * stride];
                    if conj {
                        w = w.conj();
                    }
                    let t = hi[i] * w;
                    let u = lo[i];
                    lo[i] = u + t;
                    hi[i] = u - t;
                }
            }
            len <<= 1;
        }
    }
}

fn fr_two_pi<F: Real>() -> F {
    F::PI() + F::PI()
}

/// Forward DFT of `data` (unscaled), any planned size.
pub fn forward<F: Real>(data: &mut [Complex<F>]) -> Result<()> {
    Fft::new(data.len())?.transform(data, Direction::Forward);
    Ok(())
}

/// Unscaled inverse-kernel DFT; divide by n for the true inverse.
pub fn inverse_unscaled<F: Real>(data: &mut [Complex<F>]) -> Result<()> {
    Fft::new(data.len())?.transform(data, Direction::Inverse);
    Ok(())
}
