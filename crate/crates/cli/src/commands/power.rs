//! Closed-form asymptotic power curves along one sweep axis, one CSV row
//! per grid point (times one curve per requested prevalence estimate δ).

use super::check_alpha;
use crate::args::PowerArgs;
use crate::config::{self, ConfigFile, DeltaSpec};
use crate::errors::{from_core, input, usage, CliError, Result};
use crate::table_out::{fixed6, opt_sci, CsvWriter};
use allelic::counts::StudyDesign;
use allelic::model::{self, DiseaseModel, MarkerSpec};
use allelic::power::{power_curve, PowerQuery, SweepAxis};
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

struct Settings {
    out: PathBuf,
    model: DiseaseModel,
    design: StudyDesign,
    alpha: f64,
    deltas: Vec<DeltaSpec>,
    axis: SweepAxis,
    grid: Vec<f64>,
    q1: Option<f64>,
    delta_ld: Option<f64>,
}

fn resolve(args: PowerArgs) -> Result<Settings> {
    let mut cfg = ConfigFile::load(args.common.config.as_deref())?;
    let out = config::require_path(&mut cfg, args.common.out, "out")?;
    let p1 = cfg.require(args.p1, "p1")?;
    let pi11 = cfg.require(args.pi11, "pi11")?;
    let pi12 = cfg.require(args.pi12, "pi12")?;
    let pi22 = cfg.require(args.pi22, "pi22")?;
    let cases = cfg.require(args.cases, "cases")?;
    let controls = cfg.require(args.controls, "controls")?;
    let alpha = check_alpha(cfg.resolve_or(args.alpha, "alpha", 5e-8)?)?;
    let delta_text = cfg.resolve(args.prevalence, "prevalence")?;
    let axis = config::parse_sweep_axis(&cfg.require(args.sweep, "sweep")?)?;
    let grid = config::parse_grid(&cfg.require(args.grid, "grid")?)?;
    let q1 = cfg.resolve(args.q1, "q1")?;
    let delta_ld = cfg.resolve(args.delta_ld, "delta-ld")?;
    cfg.finish()?;

    if axis == SweepAxis::PrevalenceEstimate && delta_text.is_some() {
        return Err(usage(
            "the delta_prevalence sweep varies delta itself; drop --prevalence",
        ));
    }
    let deltas = match delta_text {
        Some(text) => config::parse_delta_list(&text)?,
        None => vec![DeltaSpec::TruePrevalence],
    };

    let model = DiseaseModel::new(p1, pi11, pi12, pi22).map_err(from_core)?;
    let design = StudyDesign::new(cases, controls).map_err(from_core)?;
    Ok(Settings { out, model, design, alpha, deltas, axis, grid, q1, delta_ld })
}

/// The fixed value of a marker coordinate, or the grid's first point when
/// that coordinate is the swept one (it is overwritten per grid point).
fn coordinate(
    fixed: Option<f64>,
    swept: bool,
    grid: &[f64],
    flag: &str,
) -> Result<f64> {
    match (fixed, swept) {
        (_, true) => grid.first().copied().ok_or_else(|| usage("empty sweep grid")),
        (Some(v), false) => Ok(v),
        (None, false) => Err(usage(format!(
            "missing --{flag} (config key {flag:?}): required unless it is the sweep axis"
        ))),
    }
}

pub fn run(args: PowerArgs) -> Result<()> {
    let st = resolve(args)?;

    // Degenerate prevalence poisons every grid point and every δ, so it is
    // a whole-run infeasibility rather than a row of NAs.
    let pi = model::prevalence(&st.model);
    if !(pi > 0.0 && pi < 1.0) {
        return Err(CliError::Infeasible(format!(
            "degenerate model: prevalence is {pi}; power needs 0 < prevalence < 1"
        )));
    }

    let q1 = coordinate(st.q1, st.axis == SweepAxis::MarkerMaf, &st.grid, "q1")?;
    let delta_ld =
        coordinate(st.delta_ld, st.axis == SweepAxis::LdCoefficient, &st.grid, "delta-ld")?;
    let marker = MarkerSpec::new(q1, delta_ld).map_err(from_core)?;

    // When the marker coordinates are fixed for the whole sweep, a marker
    // infeasibility is global too: fail fast instead of emitting all-NA rows.
    if st.axis == SweepAxis::PrevalenceEstimate {
        model::marker_case_control_freqs(&st.model, &marker).map_err(from_core)?;
    }

    let multi_delta = st.deltas.len() > 1;
    let mut header: Vec<&str> = Vec::new();
    if multi_delta {
        header.push("delta");
    }
    header.extend(["sweep_value", "power_w", "power_t", "power_catt", "feasible"]);

    let out_file = File::create(&st.out)
        .map_err(|e| input(format!("cannot create {}: {e}", st.out.display())))?;
    let mut out = CsvWriter::with_header(BufWriter::new(out_file), &header)?;

    let mut rows_written = 0u64;
    let mut rows_na = 0u64;
    for delta_spec in &st.deltas {
        let delta = delta_spec.concrete(pi);
        let base = PowerQuery::new(st.model, marker, st.design, delta, st.alpha)
            .map_err(from_core)?;
        let curve = power_curve(&base, st.axis, &st.grid).map_err(from_core)?;
        for row in curve {
            let mut fields: Vec<String> = Vec::with_capacity(header.len());
            if multi_delta {
                fields.push(fixed6(delta));
            }
            fields.push(fixed6(row.sweep_value));
            fields.push(opt_sci(row.power_w));
            fields.push(opt_sci(row.power_t));
            fields.push(opt_sci(row.power_catt));
            fields.push(if row.feasible { "1" } else { "0" }.to_string());
            if row.power_w.is_none() {
                rows_na += 1;
            }
            out.row(&fields)?;
            rows_written += 1;
        }
    }
    out.finish()?;
    eprintln!(
        "power: {rows_written} rows over axis {} ({rows_na} with no computable power); \
         true prevalence {}",
        st.axis.name(),
        fixed6(pi)
    );
    Ok(())
}
