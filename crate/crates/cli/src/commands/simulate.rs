//! Synthetic marker-file generator: draws independent case-control genotype
//! tables from one disease-model/marker configuration and writes them in the
//! assoc input format, plus a `<out>.manifest` recording the ground truth.

use crate::args::SimulateArgs;
use crate::config::{self, ConfigFile};
use crate::errors::{from_core, input, usage, Result};
use crate::marker_io::HEADER;
use allelic::counts::StudyDesign;
use allelic::model::{self, DiseaseModel, MarkerSpec};
use allelic::sim::{replicate_rng, SamplerSpec};
use rayon::iter::{IntoParallelIterator, ParallelIterator};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

struct Settings {
    out: PathBuf,
    model: DiseaseModel,
    marker: MarkerSpec,
    design: StudyDesign,
    markers: u64,
    inbreeding: f64,
    seed: u64,
}

fn resolve(args: SimulateArgs) -> Result<Settings> {
    let mut cfg = ConfigFile::load(args.common.config.as_deref())?;
    let out = config::require_path(&mut cfg, args.common.out, "out")?;
    let p1 = cfg.require(args.p1, "p1")?;
    let pi11 = cfg.require(args.pi11, "pi11")?;
    let pi12 = cfg.require(args.pi12, "pi12")?;
    let pi22 = cfg.require(args.pi22, "pi22")?;
    let q1 = cfg.require(args.q1, "q1")?;
    let delta_ld = cfg.require(args.delta_ld, "delta-ld")?;
    let cases = cfg.require(args.cases, "cases")?;
    let controls = cfg.require(args.controls, "controls")?;
    let markers = cfg.require(args.markers, "markers")?;
    let inbreeding = cfg.resolve_or(args.inbreeding, "inbreeding", 0.0)?;
    let seed = cfg.resolve_or(args.seed, "seed", 0)?;
    let workers = cfg.resolve(args.workers, "workers")?;
    cfg.finish()?;

    if markers == 0 {
        return Err(usage("markers must be at least 1"));
    }
    config::install_workers(workers)?;

    let model = DiseaseModel::new(p1, pi11, pi12, pi22).map_err(from_core)?;
    let marker = MarkerSpec::new(q1, delta_ld).map_err(from_core)?;
    let design = StudyDesign::new(cases, controls).map_err(from_core)?;
    Ok(Settings { out, model, marker, design, markers, inbreeding, seed })
}

pub fn run(args: SimulateArgs) -> Result<()> {
    let st = resolve(args)?;

    let sampler = SamplerSpec::from_model(&st.model, &st.marker, st.design, st.inbreeding)
        .map_err(from_core)?;

    let count = usize::try_from(st.markers)
        .map_err(|_| usage(format!("markers={} does not fit this platform", st.markers)))?;

    // Each marker owns an independent seeded stream keyed by its index, so
    // the generated values do not depend on how rayon splits the range, and
    // the indexed collect keeps them in marker order.
    let rows: Vec<[u64; 6]> = (0..count)
        .into_par_iter()
        .map(|i| -> Result<[u64; 6], allelic::Error> {
            let mut rng = replicate_rng(st.seed, 0, i as u64);
            let t = sampler.sample_table(&mut rng)?;
            Ok([
                t.cases.hom_other(),
                t.cases.het,
                t.cases.total,
                t.controls.hom_other(),
                t.controls.het,
                t.controls.total,
            ])
        })
        .collect::<Result<_, _>>()
        .map_err(from_core)?;

    let out_file = File::create(&st.out)
        .map_err(|e| input(format!("cannot create {}: {e}", st.out.display())))?;
    let mut out = BufWriter::new(out_file);
    let write_err = |e: std::io::Error| input(format!("write error: {e}"));
    writeln!(out, "{HEADER}").map_err(write_err)?;
    for (i, r) in rows.iter().enumerate() {
        writeln!(
            out,
            "sim{:06}\t1\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            i + 1,
            (i as u64 + 1) * 1000,
            r[0],
            r[1],
            r[2],
            r[3],
            r[4],
            r[5]
        )
        .map_err(write_err)?;
    }
    out.flush().map_err(write_err)?;

    write_manifest(&st, &sampler)?;
    eprintln!(
        "simulate: {} markers at q1_cases={} q1_controls={} (seed {}) -> {}",
        st.markers,
        sampler.q1_cases,
        sampler.q1_controls,
        st.seed,
        st.out.display()
    );
    Ok(())
}

/// Ground truth for downstream checks, in the same key=value syntax the
/// config reader accepts.
fn write_manifest(st: &Settings, sampler: &SamplerSpec) -> Result<()> {
    let mut path = st.out.as_os_str().to_os_string();
    path.push(".manifest");
    let path = PathBuf::from(path);
    let file = File::create(&path)
        .map_err(|e| input(format!("cannot create {}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    let prevalence = model::prevalence(&st.model);
    let effect = model::variant_effect(&st.model).map_err(from_core)?;
    write!(
        out,
        "command=simulate\n\
         seed={}\n\
         markers={}\n\
         cases={}\n\
         controls={}\n\
         inbreeding_f={}\n\
         p1={}\n\
         pi11={}\n\
         pi12={}\n\
         pi22={}\n\
         prevalence={}\n\
         q1={}\n\
         delta_ld={}\n\
         q1_cases={}\n\
         q1_controls={}\n\
         variant_effect_b={}\n",
        st.seed,
        st.markers,
        st.design.cases,
        st.design.controls,
        st.inbreeding,
        st.model.p1,
        st.model.pi11,
        st.model.pi12,
        st.model.pi22,
        prevalence,
        st.marker.q1,
        st.marker.delta_ld,
        sampler.q1_cases,
        sampler.q1_controls,
        effect
    )
    .map_err(|e| input(format!("write error: {e}")))?;
    out.flush().map_err(|e| input(format!("write error: {e}")))
}
