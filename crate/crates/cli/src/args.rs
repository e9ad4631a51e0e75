use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: u64 = 100_000;

const EXIT_CODES: &str = "\
Exit status:
  0  success
  1  I/O error (unreadable input, unwritable output)
  2  parse error (bad flags, malformed JSON or CSV)
  3  validation error (input violates a model invariant)
  4  numeric failure (a fit did not converge)";

#[derive(Debug, Clone, Parser)]
#[command(name = "conceptua", version, about = "Extended Bloch measurements, interference fits, CHSH, rank-frequency fits and step-counting time dilation", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Simulate hidden-measurement collapses and compare with Born probabilities.
    #[command(after_help = EXIT_CODES)]
    Ebr(EbrArgs),
    /// Fit interference phases to concept-disjunction data.
    #[command(after_help = EXIT_CODES)]
    Interference(InterferenceArgs),
    /// CHSH value of four joint outcome tables.
    #[command(after_help = EXIT_CODES)]
    Bell(BellArgs),
    /// Rank-frequency table, Zipf products and Bose-Einstein/Maxwell-Boltzmann fits of a text.
    #[command(after_help = EXIT_CODES)]
    Cognitons(CognitonsArgs),
    /// Coordinate two step-counting processes in one spacetime frame.
    #[command(after_help = EXIT_CODES)]
    Dilation(DilationArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// RNG seed; runs with equal flags and seed produce identical reports.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write tab-separated plot data to this path.
    #[arg(long)]
    pub emit_plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EbrArgs {
    /// JSON document with `state`, optional `measurement` and `compare_state`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct InterferenceArgs {
    /// CSV with columns exemplar,mu_a,mu_b,mu_obs. Uses a built-in synthetic
    /// dataset when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Deviations within this band are classified as classical.
    #[arg(long, default_value_t = 1e-6)]
    pub classical_tol: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BellArgs {
    /// JSON document with tables AB, ABp, ApB, ApBp.
    #[arg(long, conflicts_with = "singlet", required_unless_present = "singlet")]
    pub input: Option<PathBuf>,
    /// Generate singlet tables for analyzer angles a,a',b,b' (radians, `pi` allowed).
    #[arg(long, allow_hyphen_values = true, value_parser = crate::input::parse_angles)]
    pub singlet: Option<[f64; 4]>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StripArg {
    AsciiPunctuation,
    NonAlphanumeric,
    Nothing,
}

#[derive(Debug, Clone, Args)]
pub struct CognitonsArgs {
    /// UTF-8 text file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = conceptua::cognitons::DEFAULT_TOP_K)]
    pub top_k: usize,
    /// Do not lowercase tokens.
    #[arg(long)]
    pub keep_case: bool,
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    /// Characters that split tokens besides whitespace.
    #[arg(long, value_enum, default_value_t = StripArg::AsciiPunctuation)]
    pub strip: StripArg,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DilationArgs {
    #[arg(long)]
    pub na: usize,
    #[arg(long)]
    pub nb: usize,
    /// Step length.
    #[arg(long = "L", default_value_t = 1.0)]
    pub step_length: f64,
    /// Signal speed.
    #[arg(long = "c", default_value_t = 1.0)]
    pub speed: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Ebr(a) => &a.common,
            Command::Interference(a) => &a.common,
            Command::Bell(a) => &a.common,
            Command::Cognitons(a) => &a.common,
            Command::Dilation(a) => &a.common,
        }
    }
}
