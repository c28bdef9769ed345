//! Command-line surface.
//!
//! Every value-carrying flag is optional at the clap layer; resolution
//! against the optional key=value config file (same keys as the long flag
//! names, flags override the file) and defaulting happen in each command's
//! `resolve` step, so "missing required setting" errors name the flag *and*
//! the config key.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "allelic",
    version,
    about = "Allele-based case-control association tests, asymptotic power, and Monte Carlo studies",
    after_help = "Exit codes: 0 success, 1 usage/config error, 2 input-data error, 3 infeasible-model error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-marker association scan over a TSV of genotype counts
    Assoc(AssocArgs),
    /// Closed-form asymptotic power curves along a parameter sweep
    Power(PowerArgs),
    /// Monte Carlo type-I-error study over a MAF grid
    Type1(Type1Args),
    /// Generate a synthetic marker file with a ground-truth manifest
    Simulate(SimulateArgs),
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Optional key=value config file; keys are the long flag names, and
    /// explicit flags override file entries
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output file path
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AssocArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Input marker file (TSV: marker_id chrom pos R0 R1 R S0 S1 S)
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,

    /// Prevalence estimate delta for the mixture-standardized statistics
    #[arg(long, value_name = "DELTA")]
    pub prevalence: Option<f64>,

    /// Two-sided significance level used for the run summary
    #[arg(long, value_name = "ALPHA")]
    pub alpha: Option<f64>,

    /// Comma-separated statistics to compute: W, T, CHI2, CATT, W_HWD,
    /// T_HWD; W/W_HWD/CATT accept an inline parameter as NAME:VALUE
    #[arg(long, value_name = "LIST")]
    pub methods: Option<String>,

    /// Heterozygote score x1 for bare CATT entries (additive = 0.5)
    #[arg(long, value_name = "X1")]
    pub catt_score: Option<f64>,

    /// Retain a marker only if its case + control counted-allele
    /// frequencies sum to at least this
    #[arg(long, value_name = "MIN")]
    pub maf_min: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Causal-variant allele frequency p1
    #[arg(long, value_name = "P1")]
    pub p1: Option<f64>,

    /// Penetrance of the A1A1 genotype
    #[arg(long, value_name = "PI11")]
    pub pi11: Option<f64>,

    /// Penetrance of the A1A2 genotype
    #[arg(long, value_name = "PI12")]
    pub pi12: Option<f64>,

    /// Penetrance of the A2A2 genotype
    #[arg(long, value_name = "PI22")]
    pub pi22: Option<f64>,

    /// Number of cases (R)
    #[arg(long, value_name = "R")]
    pub cases: Option<u64>,

    /// Number of controls (S)
    #[arg(long, value_name = "S")]
    pub controls: Option<u64>,

    /// Two-sided significance level
    #[arg(long, value_name = "ALPHA")]
    pub alpha: Option<f64>,

    /// Comma-separated delta values for W; the literal `pi` means the
    /// model's true prevalence
    #[arg(long, value_name = "LIST")]
    pub prevalence: Option<String>,

    /// Marker allele frequency q1 (fixed coordinate unless swept)
    #[arg(long, value_name = "Q1")]
    pub q1: Option<f64>,

    /// Marker LD coefficient Delta (fixed coordinate unless swept)
    #[arg(long, value_name = "DELTA_LD")]
    pub delta_ld: Option<f64>,

    /// Sweep axis: q1, delta_ld, or delta_prevalence
    #[arg(long, value_name = "AXIS")]
    pub sweep: Option<String>,

    /// Sweep grid: start:step:end or comma-separated values
    #[arg(long, value_name = "GRID")]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct Type1Args {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Number of cases (R)
    #[arg(long, value_name = "R")]
    pub cases: Option<u64>,

    /// Number of controls (S)
    #[arg(long, value_name = "S")]
    pub controls: Option<u64>,

    /// Two-sided significance level
    #[arg(long, value_name = "ALPHA")]
    pub alpha: Option<f64>,

    /// Replicates per grid point
    #[arg(long, value_name = "N")]
    pub reps: Option<u64>,

    /// RNG seed
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,

    /// Statistics to calibrate (same syntax as assoc --methods)
    #[arg(long, value_name = "LIST")]
    pub methods: Option<String>,

    /// Default delta for bare W/W_HWD method entries
    #[arg(long, value_name = "DELTA")]
    pub prevalence: Option<f64>,

    /// Heterozygote score x1 for bare CATT entries
    #[arg(long, value_name = "X1")]
    pub catt_score: Option<f64>,

    /// Null MAF grid: start:step:end or comma-separated values
    #[arg(long, value_name = "GRID")]
    pub grid: Option<String>,

    /// Wright's inbreeding coefficient F applied within each group
    #[arg(long, value_name = "F")]
    pub inbreeding: Option<f64>,

    /// Worker threads (default: all cores); results are identical for any
    /// value
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Causal-variant allele frequency p1
    #[arg(long, value_name = "P1")]
    pub p1: Option<f64>,

    /// Penetrance of the A1A1 genotype
    #[arg(long, value_name = "PI11")]
    pub pi11: Option<f64>,

    /// Penetrance of the A1A2 genotype
    #[arg(long, value_name = "PI12")]
    pub pi12: Option<f64>,

    /// Penetrance of the A2A2 genotype
    #[arg(long, value_name = "PI22")]
    pub pi22: Option<f64>,

    /// Marker allele frequency q1
    #[arg(long, value_name = "Q1")]
    pub q1: Option<f64>,

    /// Marker LD coefficient Delta (0 simulates pure null markers)
    #[arg(long, value_name = "DELTA_LD")]
    pub delta_ld: Option<f64>,

    /// Number of cases (R) per marker
    #[arg(long, value_name = "R")]
    pub cases: Option<u64>,

    /// Number of controls (S) per marker
    #[arg(long, value_name = "S")]
    pub controls: Option<u64>,

    /// Number of markers to generate
    #[arg(long, value_name = "M")]
    pub markers: Option<u64>,

    /// Wright's inbreeding coefficient F applied within each group
    #[arg(long, value_name = "F")]
    pub inbreeding: Option<f64>,

    /// RNG seed
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,

    /// Worker threads (default: all cores); output is identical for any
    /// value
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,
}
