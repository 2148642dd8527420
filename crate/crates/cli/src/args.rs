use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "listcolour", version, about = "Seeded experiments on list and DP colouring")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Master seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Skip the exhaustive oracles.
    #[arg(long, global = true)]
    pub no_oracle: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and Monte Carlo checks of the lottery with blanks.
    Lottery(LotteryArgs),
    /// Sampler frequencies and conditional-uniformity sweeps.
    Sample(SampleArgs),
    /// Exact and empirical output law of the neighbourhood resampling chain.
    Chain(ChainArgs),
    /// Run the list pipeline on an instance.
    Solve(SolveArgs),
    /// Run a cover pipeline on an instance.
    DpSolve(DpSolveArgs),
    /// Validate a cover file and decide colourability exactly.
    VerifyCover(VerifyCoverArgs),
    /// Independent-set bounds on random `K_r`-free graphs.
    Shearer(ShearerArgs),
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run one acceptance criterion, or all of them.
    Acceptance(AcceptanceArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LotteryArgs {
    /// Lottery JSON (`{"n": .., "decks": [..]}`); overrides `--n`/`--m`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub n: u32,
    /// Number of full decks; defaults to `floor((1 − ε) n ln n)`.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    /// List or cover instance; defaults to a path on three vertices.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Direct,
    Predrawn,
    Both,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChainArgs {
    /// Cover instance; defaults to the twisted 4-cycle.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub u: usize,
    /// Cover-vertex ids of the fixed independent set `I'`.
    #[arg(long, value_delimiter = ',')]
    pub fixed: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
    /// `Δ` for the predrawn threshold; defaults to the base graph's maximum
    /// degree.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 20_000)]
    pub trials: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PipelineArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    /// `n` in the bad-event thresholds.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub r: usize,
    #[arg(long, default_value_t = listcolour::solver::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = listcolour::solver::DEFAULT_BUDGET)]
    pub finish_budget: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverPipelineArg {
    Dp,
    Kr,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DpSolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pipeline: PipelineArgs,
    #[arg(long = "pipeline", value_enum, default_value_t = CoverPipelineArg::Dp)]
    pub kind: CoverPipelineArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyCoverArgs {
    pub input: PathBuf,
    /// Also report whether `H*` is `K_r`-free.
    #[arg(long, default_value_t = 3)]
    pub r: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ShearerArgs {
    #[arg(long, default_value_t = 500)]
    pub graphs: usize,
    #[arg(long, default_value_t = 22)]
    pub max_n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5])]
    pub r: Vec<usize>,
    /// Edge density; drawn per graph from `[0.2, 0.9]` when absent.
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Complete,
    Cycle,
    Path,
    RandomEdgeDensity,
    RandomTriangleFree,
    CliqueFree,
    Lists,
    Cover,
    CliqueFreeCover,
    Reed,
    Lottery,
    TwistedC4,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Edge density of the random graphs.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    /// List size.
    #[arg(long, default_value_t = 2)]
    pub size: usize,
    #[arg(long, default_value_t = 3)]
    pub palette: u32,
    /// Probability of keeping each matching pair in a random cover.
    #[arg(long, default_value_t = 0.7)]
    pub density: f64,
    /// Finishing threshold for `reed`.
    #[arg(long, default_value_t = 8.0)]
    pub l: f64,
    /// Decks for `lottery`.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub max_deck: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AcceptanceArgs {
    /// Criterion number (1 to 9); all of them when absent.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    pub criterion: Option<u8>,
}
