//! Exact weight compression and kernelization toolkit.
//!
//! The crate bundles the Frank-Tardos weight reducer (built on exact-rational
//! lattice basis reduction), kernelizations for a family of weighted
//! NP-hard problems, and brute-force reference solvers that machine-verify
//! every kernel's equivalence and size bounds on small instances.

pub mod compress;
pub mod diophantine;
pub mod error;
pub mod fewsizes;
pub mod fileformat;
pub mod generate;
pub mod lll;
pub mod numeric;
pub mod oracles;
pub mod polyprog;
pub mod ratio;
pub mod report;
pub mod setsystems;

pub use compress::{
    compress_inequality, compression_norm_bound, reduce_vector, verify_compression,
    within_norm_bound, CompressionRequest, CompressionVerdict,
};
pub use diophantine::simultaneous_approx;
pub use error::{Error, Result};
pub use lll::{lll_reduce, ReducedBasis};
pub use ratio::{IntegerVector, RationalVector};
pub use report::{EquivalenceVerdict, KernelReport};
