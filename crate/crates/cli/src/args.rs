use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Generalized entropy agglomeration.
///
/// Entropies are reported in nats. The GEA_SEED environment variable is
/// reserved; clustering is deterministic and does not read it.
#[derive(Debug, Parser)]
#[command(name = "gea", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a dendrogram from a numeric CSV or an allocation file.
    Cluster(ClusterArgs),
    /// Print the generalized entropy of an allocation file.
    Entropy(EntropyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// CSV table, categorized before clustering.
    Numeric,
    /// Allocation text file.
    Allocation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Newick,
    Both,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = Mode::Allocation)]
    pub mode: Mode,

    /// Grid points per unit (numeric mode).
    #[arg(long)]
    pub d: Option<u32>,

    /// Neighbours on each side of a central category (numeric mode).
    #[arg(long)]
    pub m: Option<u32>,

    /// Exponent of the neighbour weights (numeric mode).
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Recurrence base. Defaults to 1.0 for numeric input; overrides the
    /// header of an allocation file.
    #[arg(long)]
    pub r: Option<String>,

    /// Number of flat clusters to cut the dendrogram into.
    #[arg(long)]
    pub cut: Option<usize>,

    /// CSV column holding ground-truth labels (numeric mode).
    #[arg(long)]
    pub label_col: Option<String>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file. With `--format both` the Newick tree goes next to it
    /// with a `.nwk` extension. Defaults to standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Min-max scale every column to [0, 1] before categorizing.
    #[arg(long)]
    pub scale: bool,

    /// Also write the allocation that was clustered, in allocation text format.
    #[arg(long)]
    pub emit_allocation: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub input: PathBuf,

    /// Recurrence base overriding the file header.
    #[arg(long)]
    pub r: Option<String>,
}
