use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} = {requested} above maximum {max}")]
    Capacity {
        what: &'static str,
        requested: usize,
        max: usize,
    },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("grid size {n_grid} is not a power of two")]
    GridNotPowerOfTwo { n_grid: usize },

    #[error("grid size {n_grid} too small: need at least {required}")]
    GridTooSmall { n_grid: usize, required: usize },

    #[error("{0}")]
    Domain(String),

    #[error("sample at angle {angle} has modulus {modulus:e}, below the singularity floor {floor:e}")]
    SingularSample { angle: f64, modulus: f64, floor: f64 },

    #[error(
        "contour arc [{arc_start}, {arc_end}] passes too close to a zero: \
         min |f| = {min_modulus:e} < required {required:e}"
    )]
    ContourNearZero {
        arc_start: f64,
        arc_end: f64,
        min_modulus: f64,
        required: f64,
    },

    #[error("root iteration hit the sweep cap: {converged} of {degree} roots converged after {iterations} sweeps")]
    RootsNotConverged {
        iterations: usize,
        converged: usize,
        degree: usize,
        /// Partial root set (re, im) at the moment the cap was reached.
        partial: Vec<(f64, f64)>,
    },

    #[error("internal verification failed: {what} (max deviation {deviation:e} > tolerance {tolerance:e})")]
    Verification {
        what: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
