//! Error and not-available types shared across the crate.
//!
//! Two kinds of failure are kept deliberately distinct:
//!
//! * [`Error`] — the inputs themselves are unusable (out-of-domain
//!   parameters, an infeasible model, a malformed study plan). These abort
//!   the operation.
//! * [`NaReason`] — the inputs are fine but the requested statistic does not
//!   exist on this particular table (for example every subject carries the
//!   same allele). Pipelines carry these through as explicit `NA` codes so a
//!   downstream consumer can tell *why* a value is missing.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A scalar argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The disease model / marker combination cannot produce frequencies in
    /// (0, 1); carries the violated bound.
    #[error("infeasible model: {0}")]
    Infeasible(String),

    /// The disease model is degenerate (prevalence 0 or 1, or no effect
    /// where one is required).
    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    /// A study plan violates the protocol it is used under (e.g. a type-I
    /// error study whose sampler is not a null sampler).
    #[error("protocol error: {0}")]
    Protocol(String),

    /// A statistic is undefined on the supplied data. The reason is a stable
    /// machine-readable code, not a catch-all.
    #[error("statistic undefined: {0}")]
    Undefined(NaReason),
}

impl Error {
    /// The undefined-statistic reason, if that is what this error is.
    pub fn na_reason(&self) -> Option<NaReason> {
        match self {
            Error::Undefined(r) => Some(*r),
            _ => None,
        }
    }
}

/// Why a statistic could not be evaluated on an otherwise valid table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NaReason {
    /// The prevalence-weighted allele-frequency mixture is 0 or 1, so the
    /// contrast statistic's scale vanishes.
    MonomorphicMixture,
    /// Both groups are monomorphic, so the pooled per-group variance is zero.
    MonomorphicGroups,
    /// The pooled sample carries only one allele (chi-square margins and the
    /// trend-test variance both collapse).
    PooledMonomorphic,
    /// The trend-test variance is zero (all subjects share one genotype
    /// score).
    ZeroTrendVariance,
    /// A disequilibrium-corrected variance estimate came out non-positive;
    /// reported, never clamped.
    NonPositiveVariance,
    /// A group contains no subjects, so no frequency can be estimated.
    EmptyGroup,
}

impl NaReason {
    /// Stable short code used in CSV output.
    pub fn code(self) -> &'static str {
        match self {
            NaReason::MonomorphicMixture => "monomorphic_mixture",
            NaReason::MonomorphicGroups => "monomorphic_groups",
            NaReason::PooledMonomorphic => "pooled_monomorphic",
            NaReason::ZeroTrendVariance => "zero_trend_variance",
            NaReason::NonPositiveVariance => "nonpositive_variance",
            NaReason::EmptyGroup => "empty_group",
        }
    }
}

impl std::fmt::Display for NaReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}
