pub mod assoc;
pub mod power;
pub mod simulate;
pub mod type1;

use crate::errors::{usage, Result};

/// Column labels for a method list: the lowercase family name, with the
/// parameter appended whenever one family appears more than once (so two
/// W_δ columns can coexist).
pub fn column_labels(methods: &[allelic::stats::MethodSpec]) -> Vec<String> {
    let mut labels: Vec<String> = Vec::with_capacity(methods.len());
    for m in methods {
        let family = m.family().to_ascii_lowercase();
        let repeated = methods.iter().filter(|o| o.family() == m.family()).count() > 1;
        match (repeated, m.parameter()) {
            (true, Some(p)) => labels.push(format!("{family}{p}")),
            _ => labels.push(family),
        }
    }
    labels
}

/// Shared validation for two-sided levels used by report-producing commands.
pub fn check_alpha(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(usage(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(alpha)
}

/// Shared validation for probabilities that must be strictly interior.
pub fn check_unit_open(name: &str, x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 || x >= 1.0 {
        return Err(usage(format!("{name} must lie in (0, 1), got {x}")));
    }
    Ok(x)
}
