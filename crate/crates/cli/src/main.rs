mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latband::knot::Nomenclature;
use serde::Deserialize;

use crate::config::UsageError;

#[derive(Parser)]
#[command(name = "latband", version, about = "Band surgery experiments on knotted lattice polygons")]
struct Cli {
    /// More log output; repeat for debug messages.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    /// Mirror convention for knot names given and printed: native, rolfsen or knotplot.
    /// Files always use native names.
    #[arg(long, global = true, default_value = "native")]
    nomenclature: Nomenclature,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the polygons of a file for closure, unit steps and self-avoidance.
    Validate { file: PathBuf },
    /// Sample conformations of one knot type with a composite BFACF chain.
    Sample(SampleOpts),
    /// Apply band moves at non-coherent sites of sampled conformations.
    Reconnect(ReconnectOpts),
    /// Identify the knot type of polygons or of a PD code.
    Identify(IdentifyOpts),
    /// Signature obstruction for a pair of knots, or for the whole table.
    Obstruct(ObstructOpts),
    /// d-invariants of the lens space L(p, q).
    LensD(LensOpts),
    /// Transition probabilities from reconnection CSV files.
    Stats(StatsOpts),
    /// Print the bundled knot table.
    Table,
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleOpts {
    /// TOML file with any of the options below.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Knot type of the ensemble.
    #[arg(long)]
    knot: Option<String>,
    /// Starting conformation; defaults to the bundled one for the knot.
    #[arg(long)]
    start: Option<PathBuf>,
    /// Explicit fugacity ladder, comma separated and increasing.
    #[arg(long, value_delimiter = ',')]
    z: Option<Vec<f64>>,
    #[arg(long)]
    z_min: Option<f64>,
    #[arg(long)]
    z_max: Option<f64>,
    /// Number of chains in a geometric ladder from z-min to z-max.
    #[arg(long)]
    chains: Option<usize>,
    /// Steps per chain after burn-in.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    burn_in: Option<u64>,
    /// Steps between samples.
    #[arg(long)]
    interval: Option<u64>,
    /// Steps between swap proposals.
    #[arg(long)]
    exchange_interval: Option<u64>,
    /// Keep only samples of at least this length.
    #[arg(long)]
    min_length: Option<usize>,
    #[arg(long)]
    max_length: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Defaults to the output path with `.manifest.json` appended.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReconnectOpts {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Knot type of the sampled conformations.
    #[arg(long)]
    knot: Option<String>,
    /// Sample files; may be repeated.
    #[arg(long = "input", short)]
    input: Option<Vec<PathBuf>>,
    /// Largest number of band moves; all sites when absent.
    #[arg(long)]
    budget: Option<usize>,
    /// per-site or conformation-first.
    #[arg(long)]
    policy: Option<String>,
    /// Sites sharing one polygon reduction.
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    min_length: Option<usize>,
    #[arg(long)]
    max_length: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Ambiguous and unknown products; defaults to the output path with `.unresolved.csv` appended.
    #[arg(long)]
    unresolved: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IdentifyOpts {
    /// Polygon files.
    files: Vec<PathBuf>,
    /// A PD code such as `(1,5,2,4)(3,1,4,6)(5,3,6,2)` instead of files.
    #[arg(long, conflicts_with = "files")]
    pd: Option<String>,
    /// Also print the HOMFLY polynomial.
    #[arg(long)]
    homfly: bool,
    /// Seed for projection directions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct ObstructOpts {
    knot_a: Option<String>,
    knot_b: Option<String>,
    /// Classify every pair of equal determinant up to eight crossings.
    #[arg(long, conflicts_with_all = ["knot_a", "knot_b"])]
    table: bool,
    /// With --table, print CSV instead of matrices.
    #[arg(long, requires = "table")]
    csv: bool,
}

#[derive(Args, Debug)]
pub struct LensOpts {
    #[arg(allow_hyphen_values = true)]
    p: i64,
    #[arg(allow_hyphen_values = true)]
    q: i64,
    /// Spin^c index; all indices when absent.
    #[arg(allow_hyphen_values = true)]
    i: Option<i64>,
    /// Only the self-conjugate spin^c structures.
    #[arg(long, conflicts_with = "i")]
    self_conjugate: bool,
}

#[derive(Args, Debug)]
pub struct StatsOpts {
    /// Transition CSV files, read in order as one event stream.
    files: Vec<PathBuf>,
    /// Contiguous blocks for the confidence intervals.
    #[arg(long, default_value_t = latband::stats::DEFAULT_BLOCKS)]
    blocks: usize,
    /// Print CSV instead of a table.
    #[arg(long)]
    csv: bool,
    /// Also write the CSV report here.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Do not add a row for the mirror of each start when it was never reached.
    #[arg(long)]
    no_mirror: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match commands::run(cli.command, cli.nomenclature) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<UsageError>().is_some() { 2 } else { 1 })
        }
    }
}

fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe))
}
