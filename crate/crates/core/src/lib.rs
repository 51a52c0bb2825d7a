//! Constant-weight binary vector families under the Hamming distance ratio.
//!
//! Vectors are stored as sorted supports so that every operation costs
//! `O(p)` per pair regardless of the ambient dimension `n`. All thresholds
//! and ratios are exact rationals; no floating point takes part in any
//! accept/reject decision.
//!
//! Modules:
//! - [`vector`]: supports, families, distances, distance ratio.
//! - [`construct`]: parameter solving and the recursive block construction
//!   whose large subsets all have a big distance ratio, with verifiers.
//! - [`extract`]: iterated greedy nets that always yield a large subset
//!   with distance ratio at most `C > 2`, plus certificates.
//! - [`oracle`]: exact brute-force optimum and a seeded family generator.
//! - [`packing`]: greedy minimum-distance packings over the full slice.
//! - [`format`]: the plain-text file formats used by the CLI.

pub mod construct;
pub mod error;
pub mod extract;
pub mod format;
pub mod oracle;
pub mod packing;
pub mod rational;
pub mod rng;
pub mod vector;

pub use error::{Error, Result};
pub use rational::Rational;
pub use vector::{
    distance, distance_ratio, distance_stats, DistanceStats, SupportVector, VectorFamily,
};
