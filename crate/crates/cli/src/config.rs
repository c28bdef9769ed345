//! Key=value config files and flag/file resolution.
//!
//! A config file holds `key=value` lines (`#` comments and blank lines
//! allowed) whose keys are exactly the long flag names of the subcommand it
//! is used with. Explicit flags override file entries; unused keys are
//! rejected so typos fail loudly instead of silently falling back to
//! defaults.

use crate::errors::{usage, CliError, Result};
use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub struct ConfigFile {
    path: String,
    entries: BTreeMap<String, (String, usize)>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        Self { path: String::new(), entries: BTreeMap::new() }
    }

    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::empty()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(usage(format!(
                    "{}:{}: expected key=value, got {raw:?}",
                    path.display(),
                    idx + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if entries.insert(key.clone(), (value, idx + 1)).is_some() {
                return Err(usage(format!(
                    "{}:{}: duplicate config key {key:?}",
                    path.display(),
                    idx + 1
                )));
            }
        }
        Ok(Self { path: path.display().to_string(), entries })
    }

    /// Flag value if given, else the parsed config entry, else None.
    pub fn resolve<T: FromStr>(&mut self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        let file_entry = self.entries.remove(key);
        if flag.is_some() {
            return Ok(flag); // flag overrides; the file entry is consumed
        }
        match file_entry {
            None => Ok(None),
            Some((raw, line)) => raw.parse::<T>().map(Some).map_err(|e| {
                usage(format!("{}:{line}: bad value for {key}: {e}", self.path))
            }),
        }
    }

    /// Like [`Self::resolve`] but falls back to a default.
    pub fn resolve_or<T: FromStr>(&mut self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        Ok(self.resolve(flag, key)?.unwrap_or(default))
    }

    /// Like [`Self::resolve`] but the setting must come from somewhere.
    pub fn require<T: FromStr>(&mut self, flag: Option<T>, key: &str) -> Result<T>
    where
        T::Err: Display,
    {
        self.resolve(flag, key)?.ok_or_else(|| {
            usage(format!("missing required setting: pass --{key} or set {key}= in the config"))
        })
    }

    /// Reject leftover (unrecognized) keys. Call after all resolves.
    pub fn finish(self) -> Result<()> {
        if let Some((key, (_, line))) = self.entries.into_iter().next() {
            return Err(usage(format!(
                "{}:{line}: unknown config key {key:?} for this command",
                self.path
            )));
        }
        Ok(())
    }
}

/// A path setting is resolved like any other string value.
pub fn resolve_path(
    cfg: &mut ConfigFile,
    flag: Option<PathBuf>,
    key: &str,
) -> Result<Option<PathBuf>> {
    Ok(cfg.resolve(flag.map(|p| p.display().to_string()), key)?.map(PathBuf::from))
}

pub fn require_path(cfg: &mut ConfigFile, flag: Option<PathBuf>, key: &str) -> Result<PathBuf> {
    resolve_path(cfg, flag, key)?.ok_or_else(|| {
        usage(format!("missing required setting: pass --{key} or set {key}= in the config"))
    })
}

// ── Shared value parsers ───────────────────────────────────────────────────

/// Parse a grid: `start:step:end` (inclusive, positive step) or a
/// comma-separated value list, or a single value.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(usage("empty grid"));
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(usage(format!("grid {text:?} must be start:step:end")));
        }
        let nums = parts
            .iter()
            .map(|p| parse_f64(p, "grid bound"))
            .collect::<Result<Vec<f64>>>()?;
        let (start, step, end) = (nums[0], nums[1], nums[2]);
        if step.is_nan() || step <= 0.0 {
            return Err(usage(format!("grid step must be positive, got {step}")));
        }
        if end < start {
            return Err(usage(format!("grid end {end} is below start {start}")));
        }
        // Count first, then generate by index: no accumulated drift, and the
        // end point survives division roundoff without admitting an
        // overshooting extra point.
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    text.split(',').map(|p| parse_f64(p, "grid value")).collect()
}

fn parse_f64(text: &str, what: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| usage(format!("bad {what}: {text:?}")))
}

/// Parse a method list: comma-separated `FAMILY` or `FAMILY:PARAM` entries.
/// Families (case-insensitive): W, T, CHI2, CATT, W_HWD, T_HWD. Bare W and
/// W_HWD take `default_delta` (required then); bare CATT takes
/// `default_catt_score`.
pub fn parse_methods(
    text: &str,
    default_delta: Option<f64>,
    default_catt_score: f64,
) -> Result<Vec<allelic::stats::MethodSpec>> {
    use allelic::stats::MethodSpec;
    let mut methods = Vec::new();
    for entry in text.split(',') {
        let entry = entry.trim();
        if entry.is_empty() {
            return Err(usage(format!("empty method entry in {text:?}")));
        }
        let (family, param) = match entry.split_once(':') {
            Some((f, p)) => (f, Some(parse_f64(p, "method parameter")?)),
            None => (entry, None),
        };
        let need_delta = |param: Option<f64>| -> Result<f64> {
            param.or(default_delta).ok_or_else(|| {
                usage(format!(
                    "method {entry} needs a prevalence estimate: write {}:DELTA or pass --prevalence",
                    family.to_uppercase()
                ))
            })
        };
        let spec = match family.to_ascii_uppercase().as_str() {
            "W" => MethodSpec::w(need_delta(param)?).map_err(usage)?,
            "W_HWD" => MethodSpec::w_hwd(need_delta(param)?).map_err(usage)?,
            "T" => no_param(entry, param, MethodSpec::T)?,
            "CHI2" => no_param(entry, param, MethodSpec::Chi2)?,
            "T_HWD" => no_param(entry, param, MethodSpec::THwd)?,
            "CATT" => MethodSpec::catt(param.unwrap_or(default_catt_score)).map_err(usage)?,
            other => {
                return Err(usage(format!(
                    "unknown method {other:?}; expected W, T, CHI2, CATT, W_HWD, or T_HWD"
                )))
            }
        };
        if methods.contains(&spec) {
            return Err(usage(format!("duplicate method entry {entry}")));
        }
        methods.push(spec);
    }
    if methods.is_empty() {
        return Err(usage("no methods requested"));
    }
    Ok(methods)
}

fn no_param(
    entry: &str,
    param: Option<f64>,
    spec: allelic::stats::MethodSpec,
) -> Result<allelic::stats::MethodSpec> {
    if param.is_some() {
        return Err(usage(format!("method {entry}: {} takes no parameter", spec.family())));
    }
    Ok(spec)
}

/// One requested δ for a power run: a number, or the model's true
/// prevalence (the literal `pi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSpec {
    TruePrevalence,
    Value(f64),
}

impl DeltaSpec {
    pub fn concrete(&self, true_prevalence: f64) -> f64 {
        match self {
            DeltaSpec::TruePrevalence => true_prevalence,
            DeltaSpec::Value(v) => *v,
        }
    }
}

pub fn parse_delta_list(text: &str) -> Result<Vec<DeltaSpec>> {
    text.split(',')
        .map(|entry| {
            let entry = entry.trim();
            if entry.eq_ignore_ascii_case("pi") {
                Ok(DeltaSpec::TruePrevalence)
            } else {
                parse_f64(entry, "prevalence estimate").map(DeltaSpec::Value)
            }
        })
        .collect()
}

pub fn parse_sweep_axis(text: &str) -> Result<allelic::power::SweepAxis> {
    use allelic::power::SweepAxis;
    match text.trim().to_ascii_lowercase().as_str() {
        "q1" => Ok(SweepAxis::MarkerMaf),
        "delta_ld" => Ok(SweepAxis::LdCoefficient),
        "delta_prevalence" => Ok(SweepAxis::PrevalenceEstimate),
        other => Err(usage(format!(
            "unknown sweep axis {other:?}; expected q1, delta_ld, or delta_prevalence"
        ))),
    }
}

/// Install the requested worker count as the process-global thread pool.
/// Call at most once, before any parallel work.
pub fn install_workers(workers: Option<usize>) -> Result<()> {
    let Some(n) = workers else { return Ok(()) };
    if n == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {n} workers: {e}")))
}
