//! `hyperlab`: command-line front end. Every subcommand prints one JSON
//! document (`"schema": 1`) on stdout, or CSV where asked for grid output.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperlab::Error;
use serde_json::json;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "hyperlab", version, about = "Zero-one k-law laboratory for random uniform hypergraphs")]
pub struct Cli {
    /// Master seed for sampling commands.
    #[arg(long, global = true, env = "HYPERLAB_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Vertex cap for subset enumeration (densities, classification).
    #[arg(long, global = true, default_value_t = hyperlab::hypercore::DEFAULT_ENUMERATION_CAP)]
    pub enum_cap: usize,

    /// Vertex cap for embedding and automorphism searches.
    #[arg(long, global = true, default_value_t = hyperlab::hypercore::DEFAULT_SEARCH_CAP)]
    pub search_cap: usize,

    /// Run trials on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

/// `G` from a file, `H` either from a file or as the sub-hypergraph induced by roots.
#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long)]
    pub outer: PathBuf,
    #[arg(long, conflicts_with = "roots")]
    pub inner: Option<PathBuf>,
    /// Comma-separated vertices of `G` spanning `H` (induced).
    #[arg(long, value_delimiter = ',')]
    pub roots: Option<Vec<i64>>,
}

/// Random-graph parameters: `p = n^{-α}` or a fixed `p`.
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 3)]
    pub s: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, conflicts_with = "p")]
    pub alpha: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
}

/// A property: contains a copy of a motif, or satisfies a closed formula.
#[derive(Args, Debug, Clone)]
pub struct PropertyArgs {
    #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
    pub motif: Option<PathBuf>,
    #[arg(long)]
    pub formula: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Density e/v, or the maximum density with a witness.
    Density {
        file: PathBuf,
        #[arg(long)]
        max: bool,
    },
    /// Strict balance check.
    Balance { file: PathBuf },
    /// Safe / rigid / neutral classification of a pair at α.
    ClassifyPair {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        alpha: String,
    },
    /// Copy, embedding and automorphism counts.
    Copies {
        #[arg(long)]
        motif: PathBuf,
        #[arg(long)]
        host: PathBuf,
    },
    Distance {
        file: PathBuf,
        #[arg(long)]
        x: i64,
        #[arg(long)]
        y: i64,
    },
    /// Parses a formula and prints its normal rendering.
    Parse {
        formula: String,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Quantifier depth of a formula.
    Depth { formula: String },
    /// Evaluates a formula on a hypergraph.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        formula: String,
        /// Assignments `x=1,y=2` for free variables.
        #[arg(long, value_delimiter = ',')]
        assign: Vec<String>,
    },
    /// Solves the k-round Ehrenfeucht–Fraïssé game.
    Game {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        rounds: usize,
        /// Include the distinguishing formula when Spoiler wins.
        #[arg(long)]
        formula: bool,
    },
    /// Strict extensions of a tuple, optionally counting the maximal ones.
    Extension {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        host: PathBuf,
        #[arg(long, value_delimiter = ',')]
        tuple: Vec<i64>,
        #[arg(long, requires = "r")]
        alpha: Option<String>,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Matches a pair against the cyclic extension templates.
    Cyclic {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        m: usize,
        /// Also test cyclic maximality inside this host.
        #[arg(long)]
        host: Option<PathBuf>,
    },
    /// Finds a chain of cyclic extensions from a root vertex.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        root: Option<i64>,
    },
    /// One sample of the random hypergraph.
    Sample {
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "p")]
        alpha: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Print `.shg` text instead of JSON.
        #[arg(long)]
        shg: bool,
    },
    /// Probability estimates at one n over a list of α.
    Scan {
        #[command(flatten)]
        property: PropertyArgs,
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Joint copy counts against independent Poisson laws.
    Poisson {
        #[arg(long = "motif", required = true)]
        motifs: Vec<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Uncovered copies of H against their Poisson limit; α defaults to 1/ρ(H).
    Uncovered {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Probability estimates over an α × n grid.
    Probe {
        #[command(flatten)]
        property: PropertyArgs,
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Spectrum bound calculators.
    Bounds {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with_all = ["qk", "obeying", "violating"])]
        max_candidates: bool,
        /// Membership of α in the exceptional set Q_k.
        #[arg(long)]
        qk: Option<String>,
        /// The obeying family with denominators up to this bound.
        #[arg(long)]
        obeying: Option<u64>,
        #[arg(long)]
        violating: bool,
        /// Full table (the default).
        #[arg(long)]
        table: bool,
    },
    /// Witness hypergraphs with their verification block.
    Construct {
        #[command(subcommand)]
        which: Construct,
    },
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// The double-path pair (G, H).
    DoublePath {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: usize,
        /// Write H and G as `<prefix>.h.shg` and `<prefix>.g.shg`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The cycle-pair witness H.
    CyclePair {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        a1: usize,
        #[arg(long)]
        a2: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Trial { source, .. } => exit_code(source),
        Error::Parameter(_) | Error::Syntax { .. } | Error::Arity { .. } | Error::Unbound(_) => 2,
        Error::Capacity { .. } => 3,
        Error::Verification(_) => 4,
        _ => 1,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Capacity { .. } => "capacity",
        Error::Syntax { .. } => "syntax",
        Error::Arity { .. } => "arity",
        Error::Unbound(_) => "unbound",
        Error::Parameter(_) => "parameter",
        Error::Precondition(_) => "precondition",
        Error::Verification(_) => "verification",
        Error::Trial { .. } => "trial",
        Error::Format { .. } => "format",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            // A closed pipe (`| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let body = json!({
                "schema": SCHEMA,
                "error": { "kind": kind(&e), "message": e.to_string() },
            });
            eprintln!("{body}");
            ExitCode::from(exit_code(&e))
        }
    }
}
