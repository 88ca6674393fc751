//! Numerical laboratory for Littlewood-type polynomials on the unit circle:
//! Rudin-Shapiro pairs, Fekete polynomials, and random sign polynomials,
//! together with the machinery to measure them — norms and Mahler measure by
//! independent routes, integer autocorrelations, complete root sets with
//! classification, level crossings of the squared modulus, and value
//! equidistribution statistics.
//!
//! The numeric kernels are generic over the scalar type through [`num::Real`]
//! (`f32` or `f64`); the aliases at the crate root pin `f64`, which is what
//! the shipped tolerances assume.

pub mod autocorr;
pub mod calibration;
pub mod distribution;
pub mod error;
pub mod eval;
pub mod fft;
pub mod norms;
pub mod num;
pub mod poly;
pub mod report;
pub mod zeros;

pub use error::{Error, Result};
pub use num::Real;
pub use poly::{
    conjugate_reciprocal, fekete, is_prime_u64, legendre_symbol, rudin_shapiro,
    rudin_shapiro_with_cap, FeketePoly, Reciprocity, RudinShapiroPair, SignedPoly, DEFAULT_K_MAX,
};

/// Concrete `f64` instantiations of the generic types.
pub type Complex64 = num_complex::Complex<f64>;
pub type GridSamples64 = eval::GridSamples<f64>;
pub type CosinePoly64 = eval::CosinePoly<f64>;
pub type NormResult64 = norms::NormResult<f64>;
pub type RootSet64 = zeros::RootSet<f64>;
pub type CrossingReport64 = zeros::CrossingReport<f64>;
