//! Allele-based case-control association testing.
//!
//! The crate is organized around the life cycle of a case-control marker
//! study:
//!
//! * [`counts`] — genotype count tables and the allele-frequency estimators
//!   derived from them.
//! * [`stats`] — the association statistics themselves: the allele-frequency
//!   contrast statistic `W` (standardized with an externally supplied
//!   prevalence estimate), its pooled-variance companion `T`, the allelic
//!   chi-square, the Cochran-Armitage trend test, and
//!   Hardy-Weinberg-disequilibrium-robust variants of `W` and `T`.
//! * [`model`] — a two-locus disease/LD generative model: genotype relative
//!   risks at a causal variant induce case and control allele frequencies at
//!   a linked marker.
//! * [`power`] — closed-form asymptotic power for the statistics under that
//!   model.
//! * [`sim`] — a seeded, deterministic Monte Carlo engine for type-I-error
//!   calibration and empirical power, reproducible bit-for-bit under any
//!   worker count.
//! * [`numerics`] — the far-tail normal machinery everything else leans on.
//!
//! Statistics that cannot be evaluated on a given table (monomorphic data,
//! non-positive variance estimates) are reported as typed
//! [`NaReason`](error::NaReason) values, never as NaN.

pub mod counts;
pub mod error;
pub mod model;
pub mod numerics;
pub mod power;
pub mod sim;
pub mod stats;

pub use error::{Error, NaReason, Result};
