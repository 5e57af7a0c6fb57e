//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use neardist_core::CountMethod;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "neardist",
    version,
    about = "Nearly-equal distances in separated planar point sets"
)]
pub struct Cli {
    /// Seed for every random choice (overrides a seed in a search config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Directory that receives all output files.
    #[arg(long, global = true, default_value = ".")]
    pub output_dir: PathBuf,

    /// Format of emitted point sets.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a construction or a random separated set.
    #[command(subcommand)]
    Generate(Generate),
    /// Count qualifying pairs.
    Count(CountArgs),
    /// Check the additivity condition on the distance values.
    CheckHypothesis(HypothesisArgs),
    /// Count, check the hypothesis and compare with `n^2/4 + C n`.
    Verify(VerifyArgs),
    /// Simulated annealing for sets with many qualifying pairs.
    Search(SearchArgs),
    /// Extract a `K(1, s, s)` witness and its homogeneous refinement.
    Analyze(AnalyzeArgs),
    /// Diameter and minimum distance of a point set.
    Diameter(DiameterArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Count(_) => "count",
            Command::CheckHypothesis(_) => "check-hypothesis",
            Command::Verify(_) => "verify",
            Command::Search(_) => "search",
            Command::Analyze(_) => "analyze",
            Command::Diameter(_) => "diameter",
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "construction", rename_all = "kebab-case")]
pub enum Generate {
    /// Two columns, `k` distance values.
    TwoColumn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        eps: f64,
    },
    /// Three columns at mutual distances `t1`, `t2`, `t1 + t2`.
    Remark2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
    },
    /// Chain of `k + 1` columns.
    Emp1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: f64,
    },
    /// Chain with the extra near-arithmetic values.
    Problem3 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: f64,
    },
    /// Jittered-grid separated set in a square box.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long = "box")]
        #[serde(rename = "box")]
        box_side: f64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct Inputs {
    /// Point set (`.json` or `.csv`).
    #[arg(long)]
    pub points: PathBuf,
    /// Interval family JSON.
    #[arg(long)]
    pub intervals: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub inputs: Inputs,
    #[arg(long, default_value = "pruned")]
    pub method: CountMethod,
}

#[derive(Debug, Args, Serialize)]
pub struct HypothesisArgs {
    #[arg(long)]
    pub intervals: PathBuf,
    #[arg(long)]
    pub delta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub delta: f64,
    /// Constant `C` in the bound `n^2/4 + C n`.
    #[arg(long = "C", visible_alias = "c")]
    #[serde(rename = "C")]
    pub c: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    /// Full search config as JSON; other search flags are then ignored.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Starting point set; defaults to a random separated set.
    #[arg(long)]
    pub initial: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Interval family JSON.
    #[arg(long, conflicts_with = "t")]
    pub intervals: Option<PathBuf>,
    /// Distance values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub iterations: u64,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    #[arg(long)]
    pub initial_temperature: Option<f64>,
    #[arg(long)]
    pub cooling_factor: Option<f64>,
    #[arg(long)]
    pub jitter_sigma: Option<f64>,
    #[arg(long)]
    pub teleport_probability: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub s: usize,
    /// Size of the homogeneous refinement; defaults to `s`.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DiameterArgs {
    #[arg(long)]
    pub points: PathBuf,
}
