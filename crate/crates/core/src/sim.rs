//! Seeded Monte Carlo engine: genotype sampling under Hardy-Weinberg
//! equilibrium or disequilibrium, type-I-error tables over a MAF grid, and
//! empirical power.
//!
//! # Determinism contract
//!
//! Every replicate draws from its own random stream, derived purely from
//! `(seed, cell id, replicate index)` — see [`replicate_rng`]. Aggregation
//! is integer count summation (associative and commutative), so a study's
//! output is **bit-identical for a fixed seed no matter how many worker
//! threads run it or how the scheduler interleaves them**. This is a
//! contract of the module, not an accident of the RNG library.
//!
//! # Sampling model
//!
//! Genotypes are drawn per group as a trinomial over (2, 1, 0) copies of
//! the counted allele with probabilities
//!
//! ```text
//! P(hom)   = q² + F q(1-q)
//! P(het)   = 2 q (1-q) (1-F)
//! P(other) = (1-q)² + F q(1-q)
//! ```
//!
//! where `F` is Wright's inbreeding coefficient (`F = 0` is Hardy-Weinberg
//! equilibrium, in which case the implied allele count is Binomial(2n, q) in
//! distribution). Genotype-level sampling is the single path for both HWE
//! and HWD so trend and disequilibrium-robust statistics always have real
//! genotype counts to work on. The trinomial is drawn as two conditional
//! binomials, which keeps a replicate at O(1) cost at any group size.

use crate::counts::{CaseControlTable, GroupGenotypeCounts, StudyDesign};
use crate::error::{Error, Result};
use crate::model::{self, DiseaseModel, MarkerSpec};
use crate::numerics;
use crate::stats::{self, MethodSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

/// Replicates per work unit handed to the thread pool. Fixed (never derived
/// from the worker count) so the work decomposition — and hence the result —
/// is identical under any parallelism.
const BLOCK: u64 = 8192;

// ── Random stream derivation ───────────────────────────────────────────────

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator for one replicate of one study cell.
///
/// A 256-bit ChaCha key is expanded from `(seed, cell)` with a splitmix64
/// chain (multiplication by an odd constant keeps distinct cells at distinct
/// chain states for any fixed seed), and the replicate index selects the
/// ChaCha stream within that key. Counter-style derivation — no generator
/// state is ever shared or split between replicates.
pub fn replicate_rng(seed: u64, cell: u64, replicate: u64) -> ChaCha8Rng {
    let mut state = seed ^ cell.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replicate);
    rng
}

// ── Genotype sampling ──────────────────────────────────────────────────────

/// Most negative inbreeding coefficient compatible with allele frequency
/// `q`: `F_min = -min(q/(1-q), (1-q)/q)`.
pub fn min_inbreeding(q: f64) -> f64 {
    if q <= 0.0 || q >= 1.0 {
        return 0.0; // degenerate locus: only F ≥ 0 keeps all probabilities valid
    }
    -(q / (1.0 - q)).min((1.0 - q) / q)
}

/// Genotype class probabilities (hom, het, other-hom) for allele frequency
/// `q` under inbreeding coefficient `F`.
pub fn genotype_probs(q: f64, inbreeding_f: f64) -> Result<[f64; 3]> {
    if !q.is_finite() || !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!(
            "allele frequency must lie in [0, 1], got {q}"
        )));
    }
    let f_min = min_inbreeding(q);
    if !inbreeding_f.is_finite() || inbreeding_f < f_min || inbreeding_f > 1.0 {
        return Err(Error::Domain(format!(
            "inbreeding coefficient {inbreeding_f} invalid at q={q}: \
             F must lie in [F_min, 1] with F_min = -min(q/(1-q), (1-q)/q) = {f_min}"
        )));
    }
    let cross = q * (1.0 - q);
    // At the boundary F = F_min one class probability is an exact algebraic
    // zero that floating point may render as -1e-18; snap it.
    let hom = (q * q + inbreeding_f * cross).max(0.0);
    let het = (2.0 * cross * (1.0 - inbreeding_f)).max(0.0);
    let other = ((1.0 - q) * (1.0 - q) + inbreeding_f * cross).max(0.0);
    Ok([hom, het, other])
}

/// Draw one group's genotype counts: `n` individuals from the trinomial at
/// `(q, F)`, as Binomial(n, p_hom) followed by the conditional
/// Binomial(n - hom, p_het / (1 - p_hom)).
pub fn sample_group<R: Rng + ?Sized>(
    q: f64,
    n: u64,
    inbreeding_f: f64,
    rng: &mut R,
) -> Result<GroupGenotypeCounts> {
    let [p_hom, p_het, _] = genotype_probs(q, inbreeding_f)?;
    let hom = draw_binomial(n, p_hom, rng)?;
    let rest = n - hom;
    let het = if rest == 0 {
        0
    } else {
        let denom = 1.0 - p_hom;
        // denom > 0 whenever rest > 0 can happen; the clamp absorbs the
        // roundoff when p_het ≈ denom.
        let cond = if denom > 0.0 { (p_het / denom).min(1.0) } else { 1.0 };
        draw_binomial(rest, cond, rng)?
    };
    GroupGenotypeCounts::new(hom, het, n)
}

fn draw_binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> Result<u64> {
    if n == 0 || p <= 0.0 {
        return Ok(0);
    }
    if p >= 1.0 {
        return Ok(n);
    }
    let dist = Binomial::new(n, p)
        .map_err(|e| Error::Domain(format!("binomial({n}, {p}): {e}")))?;
    Ok(dist.sample(rng))
}

// ── Study specifications ───────────────────────────────────────────────────

/// What one simulated data set looks like: the two groups' allele
/// frequencies, the design, and the within-group inbreeding coefficient
/// (applied identically to cases and controls).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerSpec {
    pub q1_cases: f64,
    pub q1_controls: f64,
    pub design: StudyDesign,
    pub inbreeding_f: f64,
}

impl SamplerSpec {
    pub fn new(
        q1_cases: f64,
        q1_controls: f64,
        design: StudyDesign,
        inbreeding_f: f64,
    ) -> Result<Self> {
        // Validates both (q, F) pairs, including the F ≥ F_min(q) bound.
        genotype_probs(q1_cases, inbreeding_f)?;
        genotype_probs(q1_controls, inbreeding_f)?;
        Ok(Self { q1_cases, q1_controls, design, inbreeding_f })
    }

    /// A null sampler: both groups at the same frequency.
    pub fn null(q1: f64, design: StudyDesign, inbreeding_f: f64) -> Result<Self> {
        Self::new(q1, q1, design, inbreeding_f)
    }

    /// The alternative implied by a disease model and a linked marker: group
    /// frequencies from the conditional-frequency formulas, inbreeding
    /// applied within each group on top of them.
    pub fn from_model(
        model: &DiseaseModel,
        marker: &MarkerSpec,
        design: StudyDesign,
        inbreeding_f: f64,
    ) -> Result<Self> {
        let fp = model::marker_case_control_freqs(model, marker)?;
        Self::new(fp.cases, fp.controls, design, inbreeding_f)
    }

    pub fn is_null(&self) -> bool {
        self.q1_cases == self.q1_controls
    }

    /// One replicate: a full case-control genotype table.
    pub fn sample_table<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CaseControlTable> {
        let cases = sample_group(self.q1_cases, self.design.cases, self.inbreeding_f, rng)?;
        let controls =
            sample_group(self.q1_controls, self.design.controls, self.inbreeding_f, rng)?;
        Ok(CaseControlTable::new(cases, controls))
    }
}

/// A complete simulation instruction: sampler, replicate count, two-sided
/// level, the statistics to evaluate (all on the *same* tables), and the
/// seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SimPlan {
    pub sampler: SamplerSpec,
    pub replicates: u64,
    pub alpha: f64,
    pub methods: Vec<MethodSpec>,
    pub seed: u64,
}

impl SimPlan {
    pub fn new(
        sampler: SamplerSpec,
        replicates: u64,
        alpha: f64,
        methods: Vec<MethodSpec>,
        seed: u64,
    ) -> Result<Self> {
        if replicates == 0 {
            return Err(Error::Domain("simulation needs at least one replicate".into()));
        }
        // α = 0.5 (median calibration) is a legitimate smoke-test level for
        // a simulation, unlike for a power query.
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 0.5 {
            return Err(Error::Domain(format!(
                "two-sided level alpha must lie in (0, 0.5], got {alpha}"
            )));
        }
        if methods.is_empty() {
            return Err(Error::Domain("simulation needs at least one method".into()));
        }
        for (i, m) in methods.iter().enumerate() {
            if methods[..i].contains(m) {
                return Err(Error::Domain(format!(
                    "duplicate method in plan: {} {:?}",
                    m.family(),
                    m.parameter()
                )));
            }
        }
        Ok(Self { sampler, replicates, alpha, methods, seed })
    }
}

// ── Rejection decisions ────────────────────────────────────────────────────

/// Pre-resolved rejection rule: reject when the statistic clears the
/// critical value (`|z| > ξ`, or `χ² > ξ²` for the already-squared method).
/// Exactly equivalent to `p < α` through the monotone tail functions.
#[derive(Debug, Clone, Copy)]
struct RejectRule {
    threshold: f64,
    squared: bool,
}

impl RejectRule {
    fn for_method(method: &MethodSpec, alpha: f64) -> Result<Self> {
        let xi = numerics::std_normal_upper_quantile(alpha / 2.0)?;
        Ok(match method {
            MethodSpec::Chi2 => RejectRule { threshold: xi * xi, squared: true },
            _ => RejectRule { threshold: xi, squared: false },
        })
    }

    fn rejects(&self, statistic: f64) -> bool {
        if self.squared {
            statistic > self.threshold
        } else {
            statistic.abs() > self.threshold
        }
    }
}

// ── Counting engine ────────────────────────────────────────────────────────

/// Per-method tallies over a batch of replicates.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Tally {
    rejections: Vec<u64>,
    undefined: Vec<u64>,
}

impl Tally {
    fn zero(k: usize) -> Self {
        Self { rejections: vec![0; k], undefined: vec![0; k] }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.rejections.iter_mut().zip(&other.rejections) {
            *a += b;
        }
        for (a, b) in self.undefined.iter_mut().zip(&other.undefined) {
            *a += b;
        }
        self
    }
}

/// Run every replicate of one study cell and tally rejections per method.
///
/// Replicates are chunked into fixed-size blocks distributed over the
/// current rayon pool; per the determinism contract the tallies are
/// identical for any worker count.
fn run_cell(plan: &SimPlan, cell: u64) -> Result<Tally> {
    let rules = plan
        .methods
        .iter()
        .map(|m| RejectRule::for_method(m, plan.alpha))
        .collect::<Result<Vec<_>>>()?;
    let k = plan.methods.len();
    let blocks = plan.replicates.div_ceil(BLOCK);

    (0..blocks)
        .into_par_iter()
        .map(|block| {
            let lo = block * BLOCK;
            let hi = (lo + BLOCK).min(plan.replicates);
            let mut tally = Tally::zero(k);
            for replicate in lo..hi {
                let mut rng = replicate_rng(plan.seed, cell, replicate);
                let table = plan.sampler.sample_table(&mut rng)?;
                for (i, method) in plan.methods.iter().enumerate() {
                    match stats::statistic(&table, method) {
                        Ok(s) => {
                            if rules[i].rejects(s) {
                                tally.rejections[i] += 1;
                            }
                        }
                        Err(Error::Undefined(_)) => tally.undefined[i] += 1,
                        Err(other) => return Err(other),
                    }
                }
            }
            Ok(tally)
        })
        .try_reduce(|| Tally::zero(k), |a, b| Ok(a.merge(b)))
}

// ── Result tables ──────────────────────────────────────────────────────────

/// One (method, MAF) cell of a type-I-error study.
#[derive(Debug, Clone, PartialEq)]
pub struct Type1Cell {
    pub method: MethodSpec,
    pub q1: f64,
    pub rejections: u64,
    /// Replicates on which the statistic did not exist (monomorphic data…);
    /// these count toward the denominator — an undefined test cannot reject.
    pub undefined: u64,
    pub replicates: u64,
    pub alpha: f64,
}

impl Type1Cell {
    /// Observed rejection rate.
    pub fn rate(&self) -> f64 {
        self.rejections as f64 / self.replicates as f64
    }

    /// Observed type-I error divided by the nominal level.
    pub fn ratio(&self) -> f64 {
        self.rate() / self.alpha
    }

    /// Monte Carlo standard error of [`Self::ratio`]:
    /// `sqrt(rate(1-rate)/replicates) / alpha`.
    pub fn ratio_se(&self) -> f64 {
        let p = self.rate();
        (p * (1.0 - p) / self.replicates as f64).sqrt() / self.alpha
    }
}

/// Type-I-error study output: one cell per (method, grid frequency), all
/// methods sharing each replicate's table.
#[derive(Debug, Clone, PartialEq)]
pub struct Type1Table {
    pub cells: Vec<Type1Cell>,
}

impl Type1Table {
    pub fn cell(&self, method: &MethodSpec, q1: f64) -> Option<&Type1Cell> {
        self.cells.iter().find(|c| c.method == *method && c.q1 == q1)
    }
}

/// Run the null-calibration protocol: for each grid frequency, simulate
/// `plan.replicates` case-control tables at that frequency in both groups
/// and count rejections of every method.
///
/// The plan's sampler must be a null sampler (equal group frequencies); its
/// frequencies are replaced by each grid value in turn, its design and
/// inbreeding coefficient carry over. Cell `i` of the grid uses stream cell
/// id `i`, so grids are reproducible point by point.
pub fn type1_study(plan: &SimPlan, maf_grid: &[f64]) -> Result<Type1Table> {
    if !plan.sampler.is_null() {
        return Err(Error::Protocol(format!(
            "type-I-error study requires a null sampler, got group frequencies {} and {}",
            plan.sampler.q1_cases, plan.sampler.q1_controls
        )));
    }
    if maf_grid.is_empty() {
        return Err(Error::Domain("type-I-error study needs a non-empty MAF grid".into()));
    }
    let mut cells = Vec::with_capacity(maf_grid.len() * plan.methods.len());
    for (idx, &q1) in maf_grid.iter().enumerate() {
        let mut cell_plan = plan.clone();
        cell_plan.sampler =
            SamplerSpec::null(q1, plan.sampler.design, plan.sampler.inbreeding_f)?;
        let tally = run_cell(&cell_plan, idx as u64)?;
        for (i, method) in plan.methods.iter().enumerate() {
            cells.push(Type1Cell {
                method: *method,
                q1,
                rejections: tally.rejections[i],
                undefined: tally.undefined[i],
                replicates: plan.replicates,
                alpha: plan.alpha,
            });
        }
    }
    Ok(Type1Table { cells })
}

/// The protocol's summary number: the unweighted mean of one method's
/// per-MAF ratios over the given grid. Errors if the table is missing any
/// grid cell for that method.
pub fn overall_type1(table: &Type1Table, method: &MethodSpec, maf_grid: &[f64]) -> Result<f64> {
    if maf_grid.is_empty() {
        return Err(Error::Domain("overall type-I error needs a non-empty grid".into()));
    }
    let mut sum = 0.0;
    for &q1 in maf_grid {
        let cell = table.cell(method, q1).ok_or_else(|| {
            Error::Protocol(format!(
                "type-I table has no cell for method {} at q1={q1}",
                method.family()
            ))
        })?;
        sum += cell.ratio();
    }
    Ok(sum / maf_grid.len() as f64)
}

/// Empirical rejection rate of one method under a plan's sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerEstimate {
    pub method: MethodSpec,
    pub rejections: u64,
    pub undefined: u64,
    pub replicates: u64,
    pub alpha: f64,
}

impl PowerEstimate {
    /// Fraction of replicates rejected.
    pub fn power(&self) -> f64 {
        self.rejections as f64 / self.replicates as f64
    }

    /// Monte Carlo standard error `sqrt(p(1-p)/replicates)`.
    pub fn se(&self) -> f64 {
        let p = self.power();
        (p * (1.0 - p) / self.replicates as f64).sqrt()
    }
}

/// Estimate every plan method's power (or, under a null sampler, its type-I
/// error) on shared replicate tables. Stream cell id 0; vary the plan seed
/// to decorrelate separate studies.
pub fn empirical_power(plan: &SimPlan) -> Result<Vec<PowerEstimate>> {
    let tally = run_cell(plan, 0)?;
    Ok(plan
        .methods
        .iter()
        .enumerate()
        .map(|(i, method)| PowerEstimate {
            method: *method,
            rejections: tally.rejections[i],
            undefined: tally.undefined[i],
            replicates: plan.replicates,
            alpha: plan.alpha,
        })
        .collect())
}
