//! gapslab: a numerical laboratory for the minimal gaps of dilated integer
//! sequences (a_n·α) mod 1 and related difference-set statistics.
//!
//! The building blocks are exact wherever feasible: dilation factors are
//! 64-fractional-bit dyadics so torus distances are exact integers,
//! difference-set statistics come from exact counting or an exact integer
//! transform, interval-union measures are exact rationals, and billiard
//! spectra are exact fixed-point values. Floating point enters only in
//! envelope evaluation and reported ratios.

mod bits;
mod convolution;
pub mod billiard;
pub mod diffstats;
pub mod error;
pub mod experiments;
pub mod gaps;
pub mod metricda;
pub mod multtable;
pub mod numtheory;
pub mod sequences;

pub use error::{Error, Result};
