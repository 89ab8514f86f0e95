//! Library side of the `qrg` command-line tool.

pub mod commands;
pub mod report;
pub mod spec;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quasirandom::{par, Limits, Result};

pub use report::{exit_code, ReportDoc};
pub use spec::{parse_group_spec, parse_subset_spec, GroupSpec, SubsetSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpectralMethod {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WordMode {
    Exact,
    Sampled,
    Auto,
}

/// Quasirandom finite groups: character degrees, mixing, covering and word maps.
#[derive(Debug, Parser)]
#[command(name = "qrg", version)]
pub struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = one per core). Reports do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Largest group order that may be enumerated.
    #[arg(long, global = true, default_value_t = Limits::default().enumeration)]
    pub cap_enum: usize,
    /// Largest order for which the convolution operator is built densely.
    #[arg(long, global = true, default_value_t = Limits::default().dense)]
    pub cap_dense: usize,
    /// Largest number of word tuples an exact enumeration may visit.
    #[arg(long, global = true, default_value_t = Limits::default().work)]
    pub cap_work: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn limits(&self) -> Limits {
        Limits {
            enumeration: self.cap_enum,
            dense: self.cap_dense,
            work: self.cap_work,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, classes and structural flags.
    Describe { group: GroupSpec },
    /// Character table (JSON or TSV).
    Chartab { group: GroupSpec },
    /// Least degree of a nontrivial irreducible character.
    K { group: GroupSpec },
    /// Spectrum of convolution by a symmetric set and the mixing bound.
    Mix(MixArgs),
    /// Whether B·B·B covers the group.
    Cover(CoverArgs),
    /// Product-free set search, and the exact maximum for small groups.
    Productfree(ProductFreeArgs),
    /// Quasirandomness witnesses side by side.
    Profile {
        group: GroupSpec,
        /// Random subsets per tested size.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Least index of a proper subgroup.
    Minindex { group: GroupSpec },
    /// Least t with X^t equal to the group.
    Growth { group: GroupSpec, subset: SubsetSpec },
    /// Word maps.
    #[command(subcommand)]
    Word(WordCommand),
    /// Fixed-point-free elements of a transitive permutation group.
    Fpf { group: GroupSpec },
}

#[derive(Debug, Args)]
pub struct MixArgs {
    pub group: GroupSpec,
    /// Symmetric subset B.
    pub subset: SubsetSpec,
    #[arg(long, value_enum, default_value_t = SpectralMethod::Auto)]
    pub method: SpectralMethod,
    /// Also search for ab = c with a in A, b in B, c in C.
    #[arg(long, num_args = 2, value_names = ["A", "C"])]
    pub triple: Option<Vec<SubsetSpec>>,
    /// Repeat with fresh child seeds for every random subset spec.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Include the full spectrum on the augmentation ideal.
    #[arg(long)]
    pub spectrum: bool,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    pub group: GroupSpec,
    pub subset: SubsetSpec,
    /// Repeat with fresh child seeds when the subset spec is random.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct ProductFreeArgs {
    pub group: GroupSpec,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Compute the exact maximum by branch and bound (small groups only).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct WordSetArgs {
    pub group: GroupSpec,
    /// One or more words, e.g. "x1^2" "[x1,x2]".
    #[arg(required = true)]
    pub words: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum WordCommand {
    /// Exact or sampled value set of the word list.
    Values {
        #[command(flatten)]
        set: WordSetArgs,
        #[arg(long, value_enum, default_value_t = WordMode::Auto)]
        mode: WordMode,
        #[arg(long, default_value_t = quasirandom::words::DEFAULT_SAMPLES)]
        samples: u64,
    },
    /// W·W·W = L for the value set and for sparse subsets of it.
    Waring {
        #[command(flatten)]
        set: WordSetArgs,
        #[arg(long, default_value_t = 20)]
        sparse_trials: usize,
        /// Scan for products of three pairwise distinct values.
        #[arg(long)]
        distinct: bool,
        /// Scan for products of three pairwise noncommuting values.
        #[arg(long)]
        noncommuting: bool,
    },
    /// Proportion of regular semisimple elements of a matrix group.
    Rs {
        group: GroupSpec,
        /// Sample this many uniform elements instead of enumerating.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// How often two random values generate the group.
    Genprob {
        #[command(flatten)]
        set: WordSetArgs,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

/// Runs a parsed command line and returns the text to emit.
pub fn run(cli: &Cli) -> Result<String> {
    par::with_workers(cli.workers, || commands::dispatch(cli))
}
