//! Far-tail normal machinery.
//!
//! Genome-wide significance work lives at two-sided levels like 5e-8, far
//! outside the range where naive `1 - cdf(z)` evaluation survives. Everything
//! here goes through the complementary error function, which keeps the upper
//! tail accurate in *relative* terms:
//!
//! ```text
//! P(Z > z) = erfc(z / sqrt(2)) / 2
//! ```
//!
//! The erfc itself is `libm`'s SunPro-derived rational approximation (the
//! same code musl and the BSD libms ship), good to a couple of ulps over the
//! whole range we care about. Relative error of the tail stays below ~2e-13
//! out to z = 37; past z ≈ 37.5 the true value drops under the smallest
//! positive normal f64, where results degrade gracefully through subnormals
//! to zero — the best any fixed-width float can do.
//!
//! The inverse (`std_normal_upper_quantile`) is a bracketed, safeguarded
//! Newton iteration on the tail function itself — no lookup tables, no
//! separate rational approximation to keep in sync with the forward
//! direction. Chi-square (1 df) tails ride on the identity
//! `P(X > x) = 2 P(Z > sqrt(x))`.

use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8; // ln(sqrt(2*pi))

/// Upper tail `P(Z > z)` of the standard normal distribution.
///
/// Accurate in relative terms (≤ ~2e-13) wherever the result is a normal
/// f64, i.e. for z up to about 37.5; beyond that the value underflows
/// through subnormals exactly as the platform allows. The lower tail
/// (negative z) is computed by symmetry and is accurate in absolute terms.
pub fn std_normal_upper_tail(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("normal tail needs finite z, got {z}")));
    }
    Ok(0.5 * libm::erfc(z / SQRT_2))
}

/// Upper quantile: the z with `P(Z > z) = a`, for `a` in (0, 1).
///
/// Root-finds the tail function directly, so the round trip
/// `std_normal_upper_tail(std_normal_upper_quantile(a))` recovers `a` to
/// ~1e-13 relative for a ≥ 1e-12 (and keeps digesting smaller `a` down to
/// the underflow region on a best-effort basis).
pub fn std_normal_upper_quantile(a: f64) -> Result<f64> {
    if !a.is_finite() || a <= 0.0 || a >= 1.0 {
        return Err(Error::Domain(format!(
            "normal quantile needs a in (0, 1), got {a}"
        )));
    }
    if a == 0.5 {
        return Ok(0.0);
    }
    if a > 0.5 {
        // Reflect into the upper half; the absolute error of 1 - a (≤ half
        // an ulp of 1) costs less than an ulp of tail probability here.
        return Ok(-upper_half_quantile(1.0 - a));
    }
    Ok(upper_half_quantile(a))
}

/// Upper tail of the chi-square distribution with one degree of freedom.
///
/// `P(X > x) = P(Z^2 > x) = 2 P(Z > sqrt(x))`, so this inherits the far-tail
/// behaviour of the normal tail exactly — a two-sided normal p-value and the
/// chi-square p-value of the squared statistic agree to the last bit.
pub fn chi2_1df_upper_tail(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "chi-square tail needs finite x >= 0, got {x}"
        )));
    }
    Ok(2.0 * std_normal_upper_tail(x.sqrt())?)
}

/// Standard normal density φ(z).
///
/// Total for finite z (NaN propagates); underflows to zero past |z| ≈ 38.6
/// exactly as the tail itself does.
pub fn std_normal_density(z: f64) -> f64 {
    const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
    (-0.5 * z * z).exp() / SQRT_2PI
}

/// `-log10` of the two-sided normal p-value `2 P(Z > |z|)`.
///
/// For |z| beyond the underflow point (p smaller than the smallest positive
/// normal f64) this switches to the asymptotic expansion of the tail, so the
/// returned magnitude keeps growing smoothly instead of jumping to infinity.
/// Intended for report columns, not for further arithmetic.
pub fn minus_log10_two_sided(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("-log10 p needs finite z, got {z}")));
    }
    let z = z.abs();
    let p = 2.0 * std_normal_upper_tail(z)?;
    if p >= f64::MIN_POSITIVE {
        return Ok(-p.log10());
    }
    // p underflowed: Mills-ratio expansion of ln P(Z > z).
    // ln tail = -z^2/2 - ln z - ln sqrt(2 pi) + ln(1 - 1/z^2 + 3/z^4 - 15/z^6)
    let zi = 1.0 / (z * z);
    let series = (-zi * (1.0 - zi * (3.0 - 15.0 * zi))).ln_1p();
    let ln_p = std::f64::consts::LN_2 - 0.5 * z * z - z.ln() - LN_SQRT_2PI + series;
    Ok(-ln_p / std::f64::consts::LN_10)
}

// ── Internals ──────────────────────────────────────────────────────────────

/// Quantile for `a` in (0, 0.5): the root of `tail(z) = a` on z > 0.
///
/// Safeguarded Newton: a bisection bracket is maintained at all times and
/// any Newton step that leaves it (or produces garbage near the underflow
/// frontier) falls back to the midpoint. Convergence is quadratic once the
/// iterate is close, so the loop terminates in a handful of steps; the
/// iteration cap is pure paranoia.
fn upper_half_quantile(a: f64) -> f64 {
    debug_assert!(a > 0.0 && a < 0.5);

    // tail(0) = 0.5 > a; tail(40) underflows to 0 < a. Both signs covered.
    let mut lo = 0.0_f64;
    let mut hi = 40.0_f64;

    // Crude seed from the leading term of the tail asymptotics; clamped into
    // the bracket. Newton fixes the rest.
    let mut z = (-2.0 * (2.0 * a).ln()).max(0.0).sqrt().clamp(lo, hi);

    for _ in 0..200 {
        // Unwrap is fine: z stays finite inside [lo, hi].
        let t = std_normal_upper_tail(z).unwrap();
        if t > a {
            lo = z;
        } else if t < a {
            hi = z;
        } else {
            return z;
        }
        // Relative convergence in probability space, or a pinched bracket.
        if (t - a).abs() <= 4e-14 * a || (hi - lo) <= f64::EPSILON * (1.0 + lo) {
            return z;
        }

        // tail'(z) = -φ(z); Newton step on tail(z) - a = 0.
        let d = std_normal_density(z);
        let step = (t - a) / d;
        let candidate = z + step;
        z = if d > 0.0 && candidate.is_finite() && candidate > lo && candidate < hi {
            candidate
        } else {
            0.5 * (lo + hi)
        };
    }
    z
}

#[cfg(test)]
mod tests {
    // Expected values keep every digit of their reference computation.
    #![allow(clippy::excessive_precision)]

    use super::*;

    fn rel_err(got: f64, want: f64) -> f64 {
        ((got - want) / want).abs()
    }

    // Reference tails computed with 60-digit arithmetic (mpmath erfc).
    const TAIL_REFS: &[(f64, f64)] = &[
        (0.5, 0.3085375387259869),
        (1.0, 0.15865525393145705),
        (2.0, 0.022750131948179207),
        (3.0, 0.0013498980316300945),
        (5.0, 2.866515718791939e-7),
        (5.4513, 2.500146762569178e-8),
        (8.0, 6.220960574271784e-16),
        (10.0, 7.619853024160526e-24),
        (15.0, 3.6709661993127509e-51),
        (20.0, 2.7536241186062337e-89),
        (30.0, 4.906713927148187e-198),
        (37.0, 5.725571222524577e-300),
    ];

    #[test]
    fn tail_matches_high_precision_references() {
        for &(z, want) in TAIL_REFS {
            let got = std_normal_upper_tail(z).unwrap();
            assert!(
                rel_err(got, want) < 1e-12,
                "tail({z}): got {got:e}, want {want:e}, rel err {:e}",
                rel_err(got, want)
            );
        }
    }

    #[test]
    fn tail_is_symmetric_and_bounded() {
        for z in [-8.0, -3.0, -0.7, 0.0, 0.3, 1.9, 4.2, 7.5] {
            let upper = std_normal_upper_tail(z).unwrap();
            let lower = std_normal_upper_tail(-z).unwrap();
            assert!((upper + lower - 1.0).abs() < 1e-15, "symmetry broke at z={z}");
            assert!((0.0..=1.0).contains(&upper));
        }
        assert_eq!(std_normal_upper_tail(0.0).unwrap(), 0.5);
    }

    #[test]
    fn tail_underflows_gracefully_not_early() {
        // Still a normal float at z=37, subnormal but nonzero around z=38,
        // and zero only once f64 itself gives out.
        assert!(std_normal_upper_tail(37.0).unwrap() > f64::MIN_POSITIVE);
        let deep = std_normal_upper_tail(38.3).unwrap();
        assert!(deep > 0.0 && deep < f64::MIN_POSITIVE);
        assert_eq!(std_normal_upper_tail(40.0).unwrap(), 0.0);
    }

    #[test]
    fn quantile_matches_high_precision_references() {
        // (a, z) pairs from 60-digit root solves of tail(z) = a.
        let refs = [
            (0.025, 1.9599639845400545),
            (0.05, 1.6448536269514727),
            (0.005, 2.5758293035489008),
            (5e-4, 3.2905267314918946),
            (5e-5, 3.890591886413094),
            (2.5e-8, 5.4513104378454785),
            (5e-9, 5.7307288682362897),
            (1e-12, 7.034483825301132),
        ];
        for (a, want) in refs {
            let got = std_normal_upper_quantile(a).unwrap();
            assert!(
                rel_err(got, want) < 1e-12,
                "quantile({a:e}): got {got}, want {want}"
            );
        }
        assert_eq!(std_normal_upper_quantile(0.5).unwrap(), 0.0);
        // Lower half by symmetry.
        let q = std_normal_upper_quantile(0.975).unwrap();
        assert!(rel_err(q, -1.9599639845400545) < 1e-12);
    }

    #[test]
    fn quantile_round_trips_through_tail() {
        let mut a = 1e-12;
        while a < 0.5 {
            let z = std_normal_upper_quantile(a).unwrap();
            let back = std_normal_upper_tail(z).unwrap();
            assert!(
                rel_err(back, a) < 1e-9,
                "round trip at a={a:e}: z={z}, back={back:e}"
            );
            a *= 3.7;
        }
    }

    #[test]
    fn chi2_tail_is_exactly_the_two_sided_normal_tail() {
        for x in [1e-6, 0.5, 1.0, 3.84, 10.83, 29.7168, 400.0] {
            let via_chi = chi2_1df_upper_tail(x).unwrap();
            let via_z = 2.0 * std_normal_upper_tail(x.sqrt()).unwrap();
            assert_eq!(via_chi, via_z, "identity broke at x={x}");
        }
        // 29.7168 is (two-sided 5e-8 critical value)^2.
        let p = chi2_1df_upper_tail(29.7168).unwrap();
        assert!(rel_err(p, 4.9999625748070787e-8) < 1e-12);
    }

    #[test]
    fn minus_log10_continues_past_underflow() {
        // Representable region agrees with direct evaluation…
        for z in [1.0, 5.0, 10.0, 30.0, 37.0] {
            let direct = -(2.0 * std_normal_upper_tail(z).unwrap()).log10();
            let got = minus_log10_two_sided(z).unwrap();
            assert!((got - direct).abs() < 1e-9 * direct.max(1.0), "z={z}");
        }
        // …and keeps growing smoothly where the p-value underflows.
        let a = minus_log10_two_sided(40.0).unwrap();
        let b = minus_log10_two_sided(45.0).unwrap();
        assert!(a > 300.0 && b > a, "no continuation past underflow");
        let neg = minus_log10_two_sided(-5.0).unwrap();
        assert_eq!(neg, minus_log10_two_sided(5.0).unwrap());
    }

    #[test]
    fn density_matches_references_and_symmetry() {
        // 60-digit references for φ(z).
        assert!(rel_err(std_normal_density(0.0), 0.39894228040143268) < 1e-15);
        assert!(rel_err(std_normal_density(1.0), 0.24197072451914335) < 1e-14);
        assert!(rel_err(std_normal_density(5.45), 1.4161007130161179e-7) < 1e-13);
        for z in [0.3, 1.7, 6.2] {
            assert_eq!(std_normal_density(z), std_normal_density(-z));
        }
        // d/dz tail(z) = -φ(z): finite-difference cross-check.
        let eps = 1e-6;
        let slope = (std_normal_upper_tail(1.0 + eps).unwrap()
            - std_normal_upper_tail(1.0 - eps).unwrap())
            / (2.0 * eps);
        assert!((slope + std_normal_density(1.0)).abs() < 1e-10);
    }

    #[test]
    fn domain_errors_are_reported() {
        assert!(std_normal_upper_tail(f64::NAN).is_err());
        assert!(std_normal_upper_tail(f64::INFINITY).is_err());
        assert!(std_normal_upper_quantile(0.0).is_err());
        assert!(std_normal_upper_quantile(1.0).is_err());
        assert!(std_normal_upper_quantile(-0.1).is_err());
        assert!(std_normal_upper_quantile(f64::NAN).is_err());
        assert!(chi2_1df_upper_tail(-1e-9).is_err());
        assert!(chi2_1df_upper_tail(f64::NAN).is_err());
    }
}
