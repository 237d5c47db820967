use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bunkbed", version, about = "Exact bunkbed connection probabilities, reductions and searches")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Include wall-clock timings in the output.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SurfaceArg {
    Bunkbed,
    Base,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Model name from the registry (e1 .. e5, d1 .. d3).
    #[arg(long)]
    pub model: String,

    /// Edge probability (e1) or red probability (e5).
    #[arg(long)]
    pub p: Option<String>,

    /// Per-edge probabilities for e2, comma separated; one value is repeated.
    #[arg(long = "p-vec", value_delimiter = ',')]
    pub p_vec: Vec<String>,

    /// Run e1 on the bunkbed graph or on the base graph.
    #[arg(long, value_enum)]
    pub surface: Option<SurfaceArg>,

    /// Override the file's transversal set (labels, comma separated).
    #[arg(long = "transversal")]
    pub transversal: Option<String>,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long)]
    pub from: String,

    #[arg(long)]
    pub to: String,

    /// Target layer; both layers when omitted.
    #[arg(long)]
    pub layer: Option<u8>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact probability of a two-point query.
    Compute {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        query: QueryArgs,
        /// Condition on two edges getting different colours (`e,f`).
        #[arg(long = "given-different")]
        given_different: Vec<String>,
        /// Condition on two edges getting the same colour (`e,f`).
        #[arg(long = "given-same")]
        given_same: Vec<String>,
    },
    /// Connection probability as a polynomial in p (e1, e5).
    Poly {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Roots in [0, 1] of the T-averaged difference between layers.
    Critical {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Width of the isolating intervals.
        #[arg(long, default_value = "1e-9")]
        tol: String,
    },
    /// Probability averaged over all transversal sets (e5).
    Average {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        /// Evaluate at this p; the polynomial is printed otherwise.
        #[arg(long)]
        p: Option<String>,
    },
    /// Monte Carlo estimate with a fixed seed.
    Estimate {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Checks the structural identities on a graph corpus.
    VerifyLemmas {
        /// Corpus: connected simple graphs up to this many vertices.
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
        /// Extra instance files added to the corpus.
        #[arg(long)]
        graph: Vec<PathBuf>,
        /// Add the reconstructed four-vertex example.
        #[arg(long)]
        figure2: bool,
        /// Add a perturbed-weight step that must fail.
        #[arg(long)]
        negative_control: bool,
    },
    /// Applies one reduction and verifies it.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        /// Reduction name; omit to list them.
        #[arg(long)]
        op: Option<String>,
        /// `edge:E`, `vertex:X`, `triangle:XY,XZ,YZ` or `pair:E,F`; omit to list sites.
        #[arg(long)]
        site: Option<String>,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Use per-edge layer probabilities instead of the colour partition.
        #[arg(long = "p-vec", value_delimiter = ',')]
        p_vec: Vec<String>,
    },
    /// Exhaustive margin scan over enumerated graphs.
    Scan {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 1)]
        min_vertices: usize,
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
        #[arg(long)]
        max_edges: Option<usize>,
        /// Include disconnected graphs.
        #[arg(long)]
        all_graphs: bool,
        #[arg(long)]
        outerplanar: bool,
        /// Allow parallel edges up to this multiplicity (needs --max-edges).
        #[arg(long)]
        multigraph: Option<u8>,
        #[arg(long)]
        p: Option<String>,
        /// E2 probability grid, rotated over the edges.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<String>,
        /// Condition edges 0 and 1 on different colours.
        #[arg(long)]
        anti_correlated: bool,
        /// Only transversal sets of at most this size.
        #[arg(long)]
        max_t: Option<usize>,
    },
    /// Searches for the 4-vertex, 5-edge example with D3 = 13/16, E3 = 7/8.
    FindFigure2,
}
