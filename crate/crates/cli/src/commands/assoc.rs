//! Per-marker association scan: stream a marker TSV, evaluate the requested
//! statistics on every retained marker, and write one CSV row per marker in
//! input order. Markers failing the frequency filter (or carrying an empty
//! arm) go to `<out>.skipped` with a reason instead.

use super::{check_alpha, column_labels};
use crate::args::AssocArgs;
use crate::config::{self, ConfigFile};
use crate::errors::{input, usage, Result};
use crate::marker_io::{MarkerReader, MarkerRecord};
use crate::table_out::{fixed6, opt_fixed6, opt_sci, CsvWriter, NA};
use allelic::numerics;
use allelic::stats::{self, MethodSpec, TestResult};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

struct Settings {
    input: PathBuf,
    out: PathBuf,
    methods: Vec<MethodSpec>,
    alpha: f64,
    maf_min: f64,
}

fn resolve(args: AssocArgs) -> Result<Settings> {
    let mut cfg = ConfigFile::load(args.common.config.as_deref())?;
    let input = config::require_path(&mut cfg, args.input, "input")?;
    let out = config::require_path(&mut cfg, args.common.out, "out")?;
    let prevalence = cfg.resolve(args.prevalence, "prevalence")?;
    let alpha = check_alpha(cfg.resolve_or(args.alpha, "alpha", 5e-8)?)?;
    let methods_text =
        cfg.resolve(args.methods, "methods")?.unwrap_or_else(|| "W,T".to_string());
    let catt_score = cfg.resolve_or(args.catt_score, "catt-score", 0.5)?;
    let maf_min = cfg.resolve_or(args.maf_min, "maf-min", 0.02)?;
    cfg.finish()?;

    if let Some(d) = prevalence {
        super::check_unit_open("prevalence", d)?;
    }
    if !maf_min.is_finite() || !(0.0..=2.0).contains(&maf_min) {
        return Err(usage(format!(
            "maf-min must lie in [0, 2] (it thresholds the sum of two frequencies), got {maf_min}"
        )));
    }
    let methods = config::parse_methods(&methods_text, prevalence, catt_score)?;
    Ok(Settings { input, out, methods, alpha, maf_min })
}

pub fn run(args: AssocArgs) -> Result<()> {
    let st = resolve(args)?;

    let reader = MarkerReader::new(
        st.input.display().to_string(),
        BufReader::new(File::open(&st.input).map_err(|e| {
            input(format!("cannot open {}: {e}", st.input.display()))
        })?),
    );

    let labels = column_labels(&st.methods);
    let mut header: Vec<String> =
        vec!["marker_id".into(), "chrom".into(), "pos".into(), "maf_cases".into(), "maf_controls".into()];
    for label in &labels {
        header.push(format!("{label}_stat"));
        header.push(format!("{label}_p"));
        header.push(format!("{label}_mlog10p"));
    }
    header.push("na_reason".into());
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();

    let out_file = File::create(&st.out)
        .map_err(|e| input(format!("cannot create {}: {e}", st.out.display())))?;
    let mut out = CsvWriter::with_header(BufWriter::new(out_file), &header_refs)?;

    let skip_path = skip_file_path(&st.out);
    let mut skipped = BufWriter::new(File::create(&skip_path).map_err(|e| {
        input(format!("cannot create {}: {e}", skip_path.display()))
    })?);
    writeln!(skipped, "marker_id\treason").map_err(|e| input(format!("write error: {e}")))?;

    let mut n_total = 0u64;
    let mut n_retained = 0u64;
    let mut n_skipped = 0u64;
    let mut n_significant = 0u64;

    for record in reader {
        let record = record?;
        n_total += 1;
        match process(&record, &st)? {
            Outcome::Skip(reason) => {
                n_skipped += 1;
                writeln!(skipped, "{}\t{reason}", record.marker_id)
                    .map_err(|e| input(format!("write error: {e}")))?;
            }
            Outcome::Row { fields, significant } => {
                n_retained += 1;
                if significant {
                    n_significant += 1;
                }
                out.row(&fields)?;
            }
        }
    }

    out.finish()?;
    skipped.flush().map_err(|e| input(format!("write error: {e}")))?;
    eprintln!(
        "assoc: {n_total} markers read, {n_retained} retained, {n_skipped} skipped; \
         {n_significant} significant at alpha={:e} (first method)",
        st.alpha
    );
    Ok(())
}

pub fn skip_file_path(out: &std::path::Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".skipped");
    PathBuf::from(name)
}

enum Outcome {
    Skip(String),
    Row { fields: Vec<String>, significant: bool },
}

fn process(record: &MarkerRecord, st: &Settings) -> Result<Outcome> {
    // An arm with no subjects has no frequency: the filter cannot even be
    // evaluated, so the marker is reported unprocessable rather than NA.
    let fp = match record.table.freq_pair() {
        Ok(fp) => fp,
        Err(e) => {
            return Ok(Outcome::Skip(match e.na_reason() {
                Some(r) => r.code().to_string(),
                None => e.to_string(),
            }))
        }
    };

    // Frequency filter: the sum of the two counted-allele frequencies.
    let freq_sum = fp.cases + fp.controls;
    if freq_sum < st.maf_min {
        return Ok(Outcome::Skip(format!(
            "allele frequency sum {} below threshold {}",
            fixed6(freq_sum),
            st.maf_min
        )));
    }

    let mut fields: Vec<String> = vec![
        record.marker_id.clone(),
        record.chrom.clone(),
        record.pos.to_string(),
        fixed6(fp.cases),
        fixed6(fp.controls),
    ];
    let mut na_notes: Vec<String> = Vec::new();
    let mut significant = false;

    for (i, method) in st.methods.iter().enumerate() {
        match stats::evaluate(&record.table, method).map_err(usage)? {
            TestResult::Defined { statistic, p_value } => {
                fields.push(opt_sci(Some(statistic)));
                fields.push(opt_sci(Some(p_value)));
                fields.push(opt_fixed6(Some(mlog10(statistic, method)?)));
                if i == 0 && p_value < st.alpha {
                    significant = true;
                }
            }
            TestResult::Undefined { reason } => {
                fields.push(NA.into());
                fields.push(NA.into());
                fields.push(NA.into());
                na_notes.push(format!("{}:{}", method.family(), reason.code()));
            }
        }
    }
    fields.push(na_notes.join(";"));
    Ok(Outcome::Row { fields, significant })
}

/// −log10 of the two-sided p-value on the statistic's own scale
/// (chi-square values are already squared z's).
fn mlog10(statistic: f64, method: &MethodSpec) -> Result<f64> {
    let z = match method {
        MethodSpec::Chi2 => statistic.max(0.0).sqrt(),
        _ => statistic,
    };
    numerics::minus_log10_two_sided(z).map_err(usage)
}
