//! Genotype count tables and the frequency estimators read off them.
//!
//! Counts stay integers all the way to the estimator call sites — no
//! premature conversion to floats, so tables round-trip exactly through
//! files and the estimators document precisely where real arithmetic
//! starts.
//!
//! Naming convention throughout: allele `M1` is the allele being counted
//! (minor, by convention of the input format), `A` tags cases, `U` tags
//! controls. A "group" is one arm of the study.

use crate::error::{Error, NaReason, Result};

/// Genotype counts for one arm (cases or controls) at one biallelic marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupGenotypeCounts {
    /// Subjects homozygous for the counted allele (two copies).
    pub hom: u64,
    /// Heterozygous subjects (one copy).
    pub het: u64,
    /// All subjects in the group, including the uncounted homozygotes.
    pub total: u64,
}

impl GroupGenotypeCounts {
    /// Build a group, rejecting impossible tables (`hom + het > total`).
    pub fn new(hom: u64, het: u64, total: u64) -> Result<Self> {
        if hom.checked_add(het).is_none_or(|s| s > total) {
            return Err(Error::Domain(format!(
                "genotype counts exceed group size: hom={hom} het={het} total={total}"
            )));
        }
        Ok(Self { hom, het, total })
    }

    /// Subjects homozygous for the other allele.
    pub fn hom_other(&self) -> u64 {
        self.total - self.hom - self.het
    }

    /// Sample frequency of the counted allele, `(2*hom + het) / (2*total)`.
    pub fn allele_freq(&self) -> Result<f64> {
        if self.total == 0 {
            return Err(Error::Undefined(NaReason::EmptyGroup));
        }
        Ok((2 * self.hom + self.het) as f64 / (2 * self.total) as f64)
    }

    /// Sample frequency of the counted-allele homozygote, `hom / total`.
    ///
    /// Under Hardy-Weinberg equilibrium this is the squared allele
    /// frequency; the difference between the two is exactly what the
    /// disequilibrium-robust statistics correct for.
    pub fn hom_freq(&self) -> Result<f64> {
        if self.total == 0 {
            return Err(Error::Undefined(NaReason::EmptyGroup));
        }
        Ok(self.hom as f64 / self.total as f64)
    }
}

/// A full case-control genotype table at one marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseControlTable {
    pub cases: GroupGenotypeCounts,
    pub controls: GroupGenotypeCounts,
}

impl CaseControlTable {
    pub fn new(cases: GroupGenotypeCounts, controls: GroupGenotypeCounts) -> Self {
        Self { cases, controls }
    }

    /// Case/control allele-frequency estimates for this table.
    pub fn freq_pair(&self) -> Result<FreqPair> {
        Ok(FreqPair {
            cases: self.cases.allele_freq()?,
            controls: self.controls.allele_freq()?,
        })
    }

    /// The design (group sizes) this table was collected under.
    pub fn design(&self) -> Result<StudyDesign> {
        StudyDesign::new(self.cases.total, self.controls.total)
    }
}

/// Case and control allele-frequency estimates (or their population
/// counterparts — the statistics don't care which they are handed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqPair {
    /// Counted-allele frequency among cases.
    pub cases: f64,
    /// Counted-allele frequency among controls.
    pub controls: f64,
}

impl FreqPair {
    pub fn new(cases: f64, controls: f64) -> Result<Self> {
        for (label, q) in [("cases", cases), ("controls", controls)] {
            if !q.is_finite() || !(0.0..=1.0).contains(&q) {
                return Err(Error::Domain(format!(
                    "allele frequency ({label}) must lie in [0, 1], got {q}"
                )));
            }
        }
        Ok(Self { cases, controls })
    }

    /// Mixture frequency `delta * cases + (1 - delta) * controls`.
    ///
    /// With `delta` an estimate of the disease prevalence this is the
    /// population allele-frequency reconstruction the `W` statistic is
    /// standardized with.
    pub fn mixture(&self, delta: f64) -> f64 {
        delta * self.cases + (1.0 - delta) * self.controls
    }
}

/// Study arm sizes, with the derived quantities every statistic needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudyDesign {
    /// Number of cases (R).
    pub cases: u64,
    /// Number of controls (S).
    pub controls: u64,
}

impl StudyDesign {
    pub fn new(cases: u64, controls: u64) -> Result<Self> {
        if cases == 0 || controls == 0 {
            return Err(Error::Domain(format!(
                "study design needs both arms non-empty, got R={cases}, S={controls}"
            )));
        }
        Ok(Self { cases, controls })
    }

    /// Total sample size N = R + S.
    pub fn total(&self) -> u64 {
        self.cases + self.controls
    }

    /// Case fraction λ = R / N.
    pub fn case_fraction(&self) -> f64 {
        self.cases as f64 / self.total() as f64
    }

    /// Effective allele-count scale m = 2·N·λ·(1−λ) = 2RS/N.
    ///
    /// Computed as `2RS/N` in one rounding, not via λ, so the value is the
    /// correctly rounded rational.
    pub fn scale_m(&self) -> f64 {
        2.0 * self.cases as f64 * self.controls as f64 / self.total() as f64
    }
}
