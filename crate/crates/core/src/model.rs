//! The two-locus generative model behind the power functions and the
//! simulator.
//!
//! A biallelic causal variant (alleles `A1`/`A2`, frequency `p1`) carries
//! genotype penetrances `pi11, pi12, pi22`; the population is assumed in
//! Hardy-Weinberg equilibrium at the variant. A biallelic marker (alleles
//! `M1`/`M2`, frequency `q1`) is linked to it with correlation-scale
//! disequilibrium `delta_ld` (Δ), i.e. haplotype covariance
//! `D11 = Δ sqrt(p1 p2 q1 q2)`.
//!
//! Conditioning on disease status tilts the marker frequency: cases and
//! controls acquire the distinct allele frequencies returned by
//! [`marker_case_control_freqs`]. The whole effect funnels through one
//! number, the standardized variant contrast [`variant_effect`] `B`, via
//!
//! ```text
//! (q1_controls - q1_cases) / sqrt(q1 q2) = Δ · B
//! ```
//!
//! which is what makes the mixture-standardized statistic's power
//! MAF-neutral.
//!
//! Feasibility comes in two strengths. The frequency-level checks (all
//! derived frequencies inside (0, 1)) are hard preconditions — violating
//! them is an error everywhere. The haplotype-level Fréchet bounds on `D11`
//! are reported by [`feasible`]; downstream users decide whether to treat a
//! violation as fatal, because every quantity this crate computes depends on
//! the model only through the group allele frequencies.

use crate::counts::FreqPair;
use crate::error::{Error, Result};

// ── Model and marker descriptions ──────────────────────────────────────────

/// Causal-variant description: allele frequency and genotype penetrances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiseaseModel {
    /// Risk-allele frequency p1 ∈ (0, 1).
    pub p1: f64,
    /// P(disease | A1 A1).
    pub pi11: f64,
    /// P(disease | A1 A2).
    pub pi12: f64,
    /// P(disease | A2 A2).
    pub pi22: f64,
}

impl DiseaseModel {
    pub fn new(p1: f64, pi11: f64, pi12: f64, pi22: f64) -> Result<Self> {
        if !p1.is_finite() || p1 <= 0.0 || p1 >= 1.0 {
            return Err(Error::Domain(format!(
                "variant allele frequency p1 must lie in (0, 1), got {p1}"
            )));
        }
        for (name, pi) in [("pi11", pi11), ("pi12", pi12), ("pi22", pi22)] {
            if !pi.is_finite() || !(0.0..=1.0).contains(&pi) {
                return Err(Error::Domain(format!(
                    "penetrance {name} must lie in [0, 1], got {pi}"
                )));
            }
        }
        Ok(Self { p1, pi11, pi12, pi22 })
    }
}

/// Marker description: population frequency of the counted allele `M1` and
/// the correlation-scale disequilibrium with the variant's `A1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkerSpec {
    /// Marker allele frequency q1 ∈ (0, 1).
    pub q1: f64,
    /// Standardized LD coefficient Δ ∈ [-1, 1].
    pub delta_ld: f64,
}

impl MarkerSpec {
    pub fn new(q1: f64, delta_ld: f64) -> Result<Self> {
        if !q1.is_finite() || q1 <= 0.0 || q1 >= 1.0 {
            return Err(Error::Domain(format!(
                "marker allele frequency q1 must lie in (0, 1), got {q1}"
            )));
        }
        if !delta_ld.is_finite() || !(-1.0..=1.0).contains(&delta_ld) {
            return Err(Error::Domain(format!(
                "LD coefficient delta_ld must lie in [-1, 1], got {delta_ld}"
            )));
        }
        Ok(Self { q1, delta_ld })
    }
}

// ── Population quantities ──────────────────────────────────────────────────

/// Disease prevalence under Hardy-Weinberg at the variant:
/// `p1² pi11 + 2 p1 p2 pi12 + p2² pi22`.
pub fn prevalence(model: &DiseaseModel) -> f64 {
    let p1 = model.p1;
    let p2 = 1.0 - p1;
    p1 * p1 * model.pi11 + 2.0 * p1 * p2 * model.pi12 + p2 * p2 * model.pi22
}

/// Prevalence, rejecting models where conditioning on disease status is
/// meaningless (nobody, or everybody, is affected).
fn usable_prevalence(model: &DiseaseModel) -> Result<f64> {
    let pi = prevalence(model);
    if pi <= 0.0 || pi >= 1.0 {
        return Err(Error::DegenerateModel(format!(
            "prevalence is {pi}; case-control frequencies need 0 < prevalence < 1"
        )));
    }
    Ok(pi)
}

/// Case and control allele frequencies at the causal variant itself.
///
/// Straight Bayes under Hardy-Weinberg: the fraction of case alleles that
/// are `A1` is `p1 (p1 pi11 + p2 pi12) / prevalence`, and symmetrically for
/// controls. Deliberately *not* routed through the marker formula so the two
/// can cross-check each other.
pub fn variant_case_control_freqs(model: &DiseaseModel) -> Result<FreqPair> {
    let pi = usable_prevalence(model)?;
    let p1 = model.p1;
    let p2 = 1.0 - p1;
    // P(disease | allele A1) and P(disease | allele A2) for a random allele.
    let risk1 = p1 * model.pi11 + p2 * model.pi12;
    let risk2 = p1 * model.pi12 + p2 * model.pi22;
    let cases = p1 * risk1 / pi;
    let controls = p1 * (1.0 - risk1) / (1.0 - pi);
    // Paranoia: with valid inputs these are probabilities by construction.
    debug_assert!((p1 * risk1 + p2 * risk2 - pi).abs() < 1e-12);
    FreqPair::new(cases, controls)
}

/// The standardized case-control contrast at the variant,
/// `B = (p1_controls - p1_cases) / sqrt(p1 p2)`.
///
/// Every marker inherits the contrast `Δ · B` on its own standardized scale;
/// `B = 0` means the model carries no association at all.
pub fn variant_effect(model: &DiseaseModel) -> Result<f64> {
    let fp = variant_case_control_freqs(model)?;
    Ok((fp.controls - fp.cases) / (model.p1 * (1.0 - model.p1)).sqrt())
}

/// Case and control allele frequencies at a linked marker.
///
/// The conditional tilts are proportional to `sqrt(p1 p2 q1 q2) · Δ`:
///
/// ```text
/// q1_cases    = q1 + sqrt(p1 p2 q1 q2) Δ (p1 (pi11-pi12) - p2 (pi22-pi12)) / prevalence
/// q1_controls = q1 + sqrt(p1 p2 q1 q2) Δ (p1 (pi12-pi11) - p2 (pi12-pi22)) / (1 - prevalence)
/// ```
///
/// Errors with the violated bound if either frequency leaves (0, 1) — the
/// hard, frequency-level notion of infeasibility. (The haplotype-level
/// Fréchet bounds are a separate, reported-only check; see [`feasible`].)
pub fn marker_case_control_freqs(model: &DiseaseModel, marker: &MarkerSpec) -> Result<FreqPair> {
    let pi = usable_prevalence(model)?;
    let p1 = model.p1;
    let p2 = 1.0 - p1;
    let q1 = marker.q1;
    let scale = (p1 * p2 * q1 * (1.0 - q1)).sqrt() * marker.delta_ld;
    let tilt_cases = p1 * (model.pi11 - model.pi12) - p2 * (model.pi22 - model.pi12);
    let cases = q1 + scale * tilt_cases / pi;
    let controls = q1 - scale * tilt_cases / (1.0 - pi);
    if !(0.0 < cases && cases < 1.0) {
        return Err(Error::Infeasible(format!(
            "marker case frequency {cases} falls outside (0, 1) \
             (q1={q1}, delta_ld={}, prevalence={pi})",
            marker.delta_ld
        )));
    }
    if !(0.0 < controls && controls < 1.0) {
        return Err(Error::Infeasible(format!(
            "marker control frequency {controls} falls outside (0, 1) \
             (q1={q1}, delta_ld={}, prevalence={pi})",
            marker.delta_ld
        )));
    }
    FreqPair::new(cases, controls)
}

// ── Derived comparison quantities ──────────────────────────────────────────

/// The population variance ratio
/// `Q = sqrt(q1 q2) / sqrt(λ q1U q2U + (1-λ) q1A q2A)`:
/// the population limit of the sample factor linking `W` and `T`
/// (`W = T / Q̂`). Exceeds 1 exactly when `W` is the more powerful test.
pub fn variance_ratio(fp: &FreqPair, q1: f64, lambda: f64) -> Result<f64> {
    check_unit_open("q1", q1)?;
    check_unit_open("lambda", lambda)?;
    let pooled = lambda * fp.controls * (1.0 - fp.controls)
        + (1.0 - lambda) * fp.cases * (1.0 - fp.cases);
    if pooled <= 0.0 {
        return Err(Error::DegenerateModel(
            "variance ratio undefined: both group frequencies are degenerate".into(),
        ));
    }
    Ok((q1 * (1.0 - q1) / pooled).sqrt())
}

/// The case-fraction threshold
/// `λ0 = (q1A q2A - q1 q2) / (q1A q2A - q1U q2U)`:
/// for case fractions λ ≤ λ0 the variance ratio `Q` stays below 1 (and `W`
/// dominates `T`) when the counted allele is positively associated and
/// `q1_cases < 1/2`.
pub fn case_fraction_threshold(fp: &FreqPair, q1: f64) -> Result<f64> {
    check_unit_open("q1", q1)?;
    let va = fp.cases * (1.0 - fp.cases);
    let vu = fp.controls * (1.0 - fp.controls);
    let denom = va - vu;
    if denom == 0.0 {
        return Err(Error::DegenerateModel(
            "case-fraction threshold undefined: the marker carries no variance contrast".into(),
        ));
    }
    Ok((va - q1 * (1.0 - q1)) / denom)
}

fn check_unit_open(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 || x >= 1.0 {
        return Err(Error::Domain(format!("{name} must lie in (0, 1), got {x}")));
    }
    Ok(())
}

// ── Feasibility reporting ──────────────────────────────────────────────────

/// Everything that can be wrong with a (model, marker) pair, gathered in one
/// pass instead of failing on the first problem.
#[derive(Debug, Clone, Default)]
pub struct FeasibilityReport {
    pub violations: Vec<String>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Full validity report for a (model, marker) pair: degenerate prevalence,
/// frequency-level violations, and the haplotype-level Fréchet bounds
/// `max(-p1 q1, -p2 q2) ≤ D11 ≤ min(p1 q2, p2 q1)` on
/// `D11 = Δ sqrt(p1 p2 q1 q2)`.
///
/// A Fréchet violation means no joint haplotype distribution realizes the
/// requested (q1, Δ) — the derived group frequencies may still be perfectly
/// usable as a frequency-level description, which is why this is a report
/// and not an error.
pub fn feasible(model: &DiseaseModel, marker: &MarkerSpec) -> FeasibilityReport {
    let mut report = FeasibilityReport::default();

    let pi = prevalence(model);
    if pi <= 0.0 || pi >= 1.0 {
        report
            .violations
            .push(format!("prevalence {pi} is degenerate (needs 0 < prevalence < 1)"));
        return report; // nothing downstream is meaningful
    }

    let p1 = model.p1;
    let p2 = 1.0 - p1;
    let q1 = marker.q1;
    let q2 = 1.0 - q1;

    let d11 = marker.delta_ld * (p1 * p2 * q1 * q2).sqrt();
    let lower = (-p1 * q1).max(-p2 * q2);
    let upper = (p1 * q2).min(p2 * q1);
    if d11 < lower {
        report.violations.push(format!(
            "haplotype covariance D11={d11:.6} below Fréchet lower bound {lower:.6}"
        ));
    }
    if d11 > upper {
        report.violations.push(format!(
            "haplotype covariance D11={d11:.6} above Fréchet upper bound {upper:.6}"
        ));
    }

    if let Err(e) = marker_case_control_freqs(model, marker) {
        report.violations.push(e.to_string());
    }

    report
}
