use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use war_core::{ComparisonRule, DeterministicPolicy, EdgeFilter, SolverMethod};

#[derive(Debug, Parser)]
#[command(name = "war", version, about = "Exhaustive and Monte Carlo analysis of the card game of War")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report format; csv is available for tail-curve, decay-cert and mc-classic.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Record wall-clock time in reports; otherwise `elapsed_ms` is null.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Dense,
    GaussSeidel,
}

impl From<Method> for SolverMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => SolverMethod::Auto,
            Method::Dense => SolverMethod::Dense,
            Method::GaussSeidel => SolverMethod::GaussSeidel,
        }
    }
}

#[derive(Debug, Args)]
pub struct DeckArgs {
    /// Number of cards in the model deck (2..=12).
    #[arg(long)]
    pub n: usize,
    /// standard | cyclic
    #[arg(long, default_value = "standard")]
    pub rule: ComparisonRule,
}

#[derive(Debug, Args)]
pub struct ProbArgs {
    /// Probability that the left player, on winning, places their own card first.
    #[arg(long, default_value_t = 0.5)]
    pub pl1: f64,
    /// Probability that the right player, on winning, places their own card first.
    #[arg(long, default_value_t = 0.5)]
    pub pr1: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Attaining/wandering classification and degree audit of a game graph.
    Analyze {
        #[command(flatten)]
        deck: DeckArgs,
        /// both | own-first | rival-first | seat-left | seat-right
        #[arg(long, default_value = "both")]
        edges: EdgeFilter,
        /// Exit with status 2 unless the graph has no wandering state.
        #[arg(long)]
        expect_absorbing: bool,
    },
    /// Exact expected number of moves under random placement orders.
    ExpectedLength {
        #[command(flatten)]
        deck: DeckArgs,
        #[command(flatten)]
        probs: ProbArgs,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iterations: u64,
        /// Also run this many Monte Carlo games for comparison.
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
    },
    /// Exact probability that the game is still running after k moves.
    TailCurve {
        #[command(flatten)]
        deck: DeckArgs,
        #[command(flatten)]
        probs: ProbArgs,
        /// Report every k in 0..=max-k.
        #[arg(long, default_value_t = 200, conflicts_with = "ks")]
        max_k: u64,
        /// Explicit comma-separated list of k values.
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<u64>>,
        /// Start from this model deal instead of a uniform equal split.
        #[arg(long)]
        deal: Option<String>,
    },
    /// Geometric decay certificate p_alive(kN) <= (1-q)^k.
    DecayCert {
        #[command(flatten)]
        deck: DeckArgs,
        #[command(flatten)]
        probs: ProbArgs,
        #[arg(long, default_value_t = 200)]
        horizon: u64,
    },
    /// Search deals that never end under a fixed placement policy.
    FindCycle {
        #[command(flatten)]
        deck: DeckArgs,
        /// own-first | rival-first | seat-left | seat-right
        #[arg(long, default_value = "seat-left-first")]
        policy: DeterministicPolicy,
        /// Search every state, not only equal-split deals.
        #[arg(long)]
        all_states: bool,
        /// Certificates to include in the report.
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Re-simulate a cycle certificate (JSON file).
    VerifyCycle {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Deals either player can still win.
    TwoOutcome {
        #[command(flatten)]
        deck: DeckArgs,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// One classic 52-card game.
    SimulateClassic {
        /// Deal file, or inline `L: ... ; R: ...` text; shuffled from --seed if absent.
        #[arg(long)]
        deal: Option<String>,
        /// Play a fixed policy instead of random placement orders.
        #[arg(long)]
        policy: Option<DeterministicPolicy>,
        #[command(flatten)]
        probs: ProbArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
        #[arg(long, default_value_t = 1)]
        face_down: usize,
    },
    /// Monte Carlo over shuffled classic deals.
    McClassic {
        #[command(flatten)]
        probs: ProbArgs,
        #[arg(long, default_value_t = 1_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
        #[arg(long, default_value_t = 1)]
        face_down: usize,
    },
    /// Check that a deal never ends under a policy. Classic deals are checked
    /// by their rank pattern over 26-move blocks, model deals by exact cycle
    /// detection.
    VerifyDeal {
        /// Deal file, or inline `L: ... ; R: ...` text.
        #[arg(long)]
        deal: String,
        #[arg(long, default_value = "seat-left-first")]
        policy: DeterministicPolicy,
        /// Comparison rule for model deals.
        #[arg(long, default_value = "standard")]
        rule: ComparisonRule,
        /// 26-move blocks to check for classic deals.
        #[arg(long, default_value_t = 1)]
        blocks: u64,
    },
}
