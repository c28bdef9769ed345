//! The association statistics.
//!
//! All of them contrast case and control allele frequencies at one biallelic
//! marker; they differ in how the contrast is standardized:
//!
//! * [`w_statistic`] — scales by the *prevalence-weighted mixture* frequency
//!   `q_δ = δ·q̂_A + (1-δ)·q̂_U` (δ an external prevalence estimate). Under a
//!   true null that mixture estimates the population frequency, which makes
//!   the statistic's null variance 1 regardless of the minor-allele
//!   frequency — this is the MAF-neutral test.
//! * [`t_statistic`] — scales by the case-fraction-weighted *per-group*
//!   variance estimate; the textbook two-proportion z-test on alleles.
//! * [`chi2_allelic`] — Pearson chi-square on the 2×2 allele table;
//!   asymptotically `T²` (the two differ only in how variance is pooled).
//! * [`catt`] — Cochran-Armitage trend test on genotypes with scores
//!   `(0, x1, 1)`, oriented so its sign agrees with `T`'s.
//! * [`w_hwd`], [`t_hwd`] — the same standardizations with the
//!   Hardy-Weinberg-equilibrium variance `q(1-q)` replaced by
//!   `q(1-q) + (q_hom - q²)`, the genotype-level variance that stays honest
//!   under Hardy-Weinberg disequilibrium.
//!
//! Statistics keep their sign: negative means the counted allele is more
//! frequent among cases. Two-sided p-values come from [`p_value`].
//!
//! A statistic that does not exist on a table (monomorphic data, vanishing
//! variance) is reported as [`Error::Undefined`] with a typed reason —
//! never NaN — and [`evaluate`] folds that into a [`TestResult`] that
//! pipelines can serialize as an explicit NA code.

use crate::counts::{CaseControlTable, FreqPair, StudyDesign};
use crate::error::{Error, NaReason, Result};
use crate::numerics;

// ── Method descriptors ─────────────────────────────────────────────────────

/// A statistic plus the parameters it needs. This is what run configurations
/// and simulation plans carry around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodSpec {
    /// Mixture-standardized contrast with prevalence estimate `delta`.
    W { delta: f64 },
    /// Per-group-variance contrast.
    T,
    /// Pearson chi-square on the allele 2×2 table.
    Chi2,
    /// Cochran-Armitage trend test with scores (0, x1, 1).
    Catt { x1: f64 },
    /// Disequilibrium-robust W.
    WHwd { delta: f64 },
    /// Disequilibrium-robust T.
    THwd,
}

impl MethodSpec {
    pub fn w(delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(MethodSpec::W { delta })
    }

    pub fn w_hwd(delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(MethodSpec::WHwd { delta })
    }

    pub fn catt(x1: f64) -> Result<Self> {
        if !x1.is_finite() || !(0.0..=1.0).contains(&x1) {
            return Err(Error::Domain(format!(
                "trend score x1 must lie in [0, 1], got {x1}"
            )));
        }
        Ok(MethodSpec::Catt { x1 })
    }

    /// Short family name, stable across runs: `W`, `T`, `CHI2`, `CATT`,
    /// `W_HWD`, `T_HWD`. Parameters (δ, x1) are reported separately.
    pub fn family(&self) -> &'static str {
        match self {
            MethodSpec::W { .. } => "W",
            MethodSpec::T => "T",
            MethodSpec::Chi2 => "CHI2",
            MethodSpec::Catt { .. } => "CATT",
            MethodSpec::WHwd { .. } => "W_HWD",
            MethodSpec::THwd => "T_HWD",
        }
    }

    /// The method's parameter (δ or x1), if it has one.
    pub fn parameter(&self) -> Option<f64> {
        match self {
            MethodSpec::W { delta } | MethodSpec::WHwd { delta } => Some(*delta),
            MethodSpec::Catt { x1 } => Some(*x1),
            MethodSpec::T | MethodSpec::Chi2 | MethodSpec::THwd => None,
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
        return Err(Error::Domain(format!(
            "prevalence estimate delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// Outcome of evaluating one method on one table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestResult {
    Defined { statistic: f64, p_value: f64 },
    Undefined { reason: NaReason },
}

// ── Frequency-based statistics ─────────────────────────────────────────────

/// The mixture-standardized contrast statistic
/// `W = sqrt(m) (q̂_U - q̂_A) / sqrt(q_δ (1 - q_δ))`.
pub fn w_statistic(fp: &FreqPair, design: &StudyDesign, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let q_mix = fp.mixture(delta);
    let scale2 = q_mix * (1.0 - q_mix);
    if scale2 <= 0.0 {
        return Err(Error::Undefined(NaReason::MonomorphicMixture));
    }
    Ok(design.scale_m().sqrt() * (fp.controls - fp.cases) / scale2.sqrt())
}

/// The per-group-variance contrast statistic
/// `T = sqrt(m) (q̂_U - q̂_A) / sqrt(λ q̂_U(1-q̂_U) + (1-λ) q̂_A(1-q̂_A))`.
///
/// Note the weighting: the case fraction λ multiplies the *control* term —
/// that is what makes `m · Var(q̂_U - q̂_A)` come out as exactly this sum.
pub fn t_statistic(fp: &FreqPair, design: &StudyDesign) -> Result<f64> {
    let lam = design.case_fraction();
    let pooled =
        lam * fp.controls * (1.0 - fp.controls) + (1.0 - lam) * fp.cases * (1.0 - fp.cases);
    if pooled <= 0.0 {
        return Err(Error::Undefined(NaReason::MonomorphicGroups));
    }
    Ok(design.scale_m().sqrt() * (fp.controls - fp.cases) / pooled.sqrt())
}

/// The ratio `Q̂_δ = sqrt(q_δ(1-q_δ)) / sqrt(λ q̂_U(1-q̂_U) + (1-λ) q̂_A(1-q̂_A))`
/// linking the two standardizations: `W = T / Q̂` identically.
///
/// Under a true null it converges to 1 for any δ; under an alternative it
/// does not, which is exactly where the two tests part ways.
pub fn q_hat_factor(fp: &FreqPair, design: &StudyDesign, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let q_mix = fp.mixture(delta);
    let num2 = q_mix * (1.0 - q_mix);
    if num2 <= 0.0 {
        return Err(Error::Undefined(NaReason::MonomorphicMixture));
    }
    let lam = design.case_fraction();
    let den2 =
        lam * fp.controls * (1.0 - fp.controls) + (1.0 - lam) * fp.cases * (1.0 - fp.cases);
    if den2 <= 0.0 {
        return Err(Error::Undefined(NaReason::MonomorphicGroups));
    }
    Ok((num2 / den2).sqrt())
}

// ── Table-based statistics ─────────────────────────────────────────────────

/// Pearson chi-square on the 2×2 allele count table (1 df). No continuity
/// correction.
pub fn chi2_allelic(table: &CaseControlTable) -> Result<f64> {
    let design = table.design()?;
    // Allele counts: a/b = counted/other among cases, c/d among controls.
    let a = (2 * table.cases.hom + table.cases.het) as f64;
    let b = 2.0 * design.cases as f64 - a;
    let c = (2 * table.controls.hom + table.controls.het) as f64;
    let d = 2.0 * design.controls as f64 - c;
    let n = a + b + c + d;
    let m1 = a + c; // counted-allele margin
    let m2 = b + d;
    if m1 <= 0.0 || m2 <= 0.0 {
        return Err(Error::Undefined(NaReason::PooledMonomorphic));
    }
    let det = a * d - b * c;
    Ok(n * det * det / ((a + b) * (c + d) * m1 * m2))
}

/// Cochran-Armitage trend test with genotype scores `(0, x1, 1)` over
/// 0/1/2 copies of the counted allele.
///
/// `U = Σ x_i (R·s_i - S·r_i)` — oriented so the sign matches
/// [`t_statistic`] — and `Var(U) = RS [Σ x_i² n_i - (Σ x_i n_i)²/N]`, the
/// null variance under independent multinomial sampling of the two arms.
pub fn catt(table: &CaseControlTable, x1: f64) -> Result<f64> {
    if !x1.is_finite() || !(0.0..=1.0).contains(&x1) {
        return Err(Error::Domain(format!(
            "trend score x1 must lie in [0, 1], got {x1}"
        )));
    }
    let design = table.design()?;
    let r_cases = design.cases as f64;
    let s_controls = design.controls as f64;
    let n = design.total() as f64;

    // Class counts indexed by copies 0/1/2; scores 0, x1, 1.
    let (r1, r2) = (table.cases.het as f64, table.cases.hom as f64);
    let (s1, s2) = (table.controls.het as f64, table.controls.hom as f64);
    let u = x1 * (r_cases * s1 - s_controls * r1) + (r_cases * s2 - s_controls * r2);

    let n1 = r1 + s1;
    let n2 = r2 + s2;
    let sum_xn = x1 * n1 + n2;
    let sum_x2n = x1 * x1 * n1 + n2;
    let var = r_cases * s_controls * (sum_x2n - sum_xn * sum_xn / n);
    if var <= 0.0 {
        return Err(Error::Undefined(NaReason::ZeroTrendVariance));
    }
    Ok(u / var.sqrt())
}

/// Disequilibrium-robust `W`: the mixture variance picks up the estimated
/// homozygote excess, `q_δ(1-q_δ) + (q_hom,δ - q_δ²)`, with both mixtures
/// taken at the same δ. Non-positive variance estimates are reported
/// (possible under extreme disequilibrium), never clamped.
pub fn w_hwd(table: &CaseControlTable, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let design = table.design()?;
    let fp = table.freq_pair()?;
    let q_mix = fp.mixture(delta);
    let hom_mix = delta * table.cases.hom_freq()? + (1.0 - delta) * table.controls.hom_freq()?;
    let var = q_mix * (1.0 - q_mix) + (hom_mix - q_mix * q_mix);
    if var <= 0.0 {
        return Err(Error::Undefined(NaReason::NonPositiveVariance));
    }
    Ok(design.scale_m().sqrt() * (fp.controls - fp.cases) / var.sqrt())
}

/// Disequilibrium-robust `T`: each group's `q(1-q)` is replaced by its
/// genotype-level variance `q(1-q) + (q_hom - q²)` before the λ-weighted
/// pooling.
pub fn t_hwd(table: &CaseControlTable) -> Result<f64> {
    let design = table.design()?;
    let fp = table.freq_pair()?;
    let lam = design.case_fraction();
    let var_u = group_allele_variance(fp.controls, table.controls.hom_freq()?);
    let var_a = group_allele_variance(fp.cases, table.cases.hom_freq()?);
    let pooled = lam * var_u + (1.0 - lam) * var_a;
    if pooled <= 0.0 {
        return Err(Error::Undefined(NaReason::NonPositiveVariance));
    }
    Ok(design.scale_m().sqrt() * (fp.controls - fp.cases) / pooled.sqrt())
}

/// Per-allele sampling variance of one group's frequency estimate without
/// assuming Hardy-Weinberg equilibrium: `q(1-q) + (q_hom - q²)`.
fn group_allele_variance(q: f64, hom: f64) -> f64 {
    q * (1.0 - q) + (hom - q * q)
}

// ── P-values and dispatch ──────────────────────────────────────────────────

/// Two-sided p-value for a statistic: `2 P(Z > |s|)` for the z-scaled
/// statistics, the 1-df chi-square upper tail for [`MethodSpec::Chi2`].
pub fn p_value(statistic: f64, method: &MethodSpec) -> Result<f64> {
    match method {
        MethodSpec::Chi2 => numerics::chi2_1df_upper_tail(statistic),
        _ => Ok(2.0 * numerics::std_normal_upper_tail(statistic.abs())?),
    }
}

/// The bare statistic of one method on one table — the hot-loop variant of
/// [`evaluate`] that skips the p-value. Undefined outcomes surface as
/// [`Error::Undefined`] with their typed reason.
pub fn statistic(table: &CaseControlTable, method: &MethodSpec) -> Result<f64> {
    let design = table.design()?;
    match method {
        MethodSpec::W { delta } => w_statistic(&table.freq_pair()?, &design, *delta),
        MethodSpec::T => t_statistic(&table.freq_pair()?, &design),
        MethodSpec::Chi2 => chi2_allelic(table),
        MethodSpec::Catt { x1 } => catt(table, *x1),
        MethodSpec::WHwd { delta } => w_hwd(table, *delta),
        MethodSpec::THwd => t_hwd(table),
    }
}

/// Evaluate one method on one table, folding undefined-statistic outcomes
/// into the result instead of erroring. Hard errors (invalid δ or x1, empty
/// arms) still propagate.
pub fn evaluate(table: &CaseControlTable, method: &MethodSpec) -> Result<TestResult> {
    match statistic(table, method) {
        Ok(statistic) => Ok(TestResult::Defined {
            statistic,
            p_value: p_value(statistic, method)?,
        }),
        Err(Error::Undefined(reason)) => Ok(TestResult::Undefined { reason }),
        Err(other) => Err(other),
    }
}
