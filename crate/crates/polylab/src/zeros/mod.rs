//! Zero location and the audits built on it: complete root sets by
//! simultaneous Aberth-Ehrlich iteration, on-circle/annulus classification,
//! argument-principle winding counts as an independent oracle, level
//! crossings of the squared modulus, and pointwise inequality audits.

mod aberth;
mod audits;
mod classify;
mod crossings;

pub use aberth::{find_roots, find_roots_with_cap, RootSet, DEFAULT_DEGREE_CAP};
pub use audits::{bernstein_audit, nearest_zero_audit, root_of_unity_floor, NearestZeroAudit};
pub use classify::{
    argument_principle_count, argument_principle_count_adaptive, classify, ZeroClassification,
};
pub use crossings::{
    level_crossings, realpart_zero_count, sublevel_measure, unimodular_count_reciprocal,
    CrossingReport, ReOrIm, UnimodularCount,
};
