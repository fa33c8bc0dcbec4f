use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "lpga",
    version,
    about = "Leavitt path algebras and their spatial representations on lp spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Graph file (JSON).
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,

    /// Exponent p >= 1.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub p: f64,

    /// Filtration level k.
    #[arg(long, global = true, default_value_t = 3)]
    pub level: usize,

    /// Seed for every randomized step; falls back to LPGA_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Phase of S_a as `a=re[,im]`; must be unimodular. Repeatable.
    #[arg(long, global = true)]
    pub phase: Vec<String>,

    /// Atom weights: a JSON array in layout order or an object atom -> weight.
    #[arg(long, global = true)]
    pub weights: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Special-edge overrides, `{"special_edges": {"v": "a"}}`.
    #[arg(long, global = true)]
    pub policy: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of an element.
    Normalize {
        #[arg(long)]
        element: PathBuf,
    },
    /// Normalized product of two elements.
    Mul {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Spectral component Φₙ of an element.
    Phi {
        #[arg(long)]
        element: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        /// Also rewrite the result onto level `--level`.
        #[arg(long)]
        expand: bool,
        /// Also build the degree-shifting element x with Φ₀(a x) = a x.
        #[arg(long)]
        shift: bool,
    },
    /// Gauge action: applies γ_z to `--element`, or checks equivariance of the
    /// atomic family when no element is given.
    Gauge {
        /// `re,im`; rational strings such as `1/2` keep exact arithmetic.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// Vertex classes, cycles and, for acyclic graphs, the matrix blocks.
    Decompose,
    /// CK completion of `--subgraph` inside `--graph` and its embedded family.
    CompleteCk {
        #[arg(long)]
        subgraph: PathBuf,
        /// Vertex of the ambient graph treated as an infinite receiver.
        #[arg(long)]
        receiver: Vec<String>,
    },
    /// Truncated desingularization.
    Desingularize {
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Whether `--subgraph` is a Cuntz–Krieger subgraph of `--graph`.
    CkSubgraph {
        #[arg(long)]
        subgraph: PathBuf,
    },
    /// Matrix of an element in the atomic family.
    Represent {
        #[arg(long)]
        element: PathBuf,
    },
    /// Operator norm of a represented element.
    Norm {
        #[arg(long)]
        element: PathBuf,
    },
    /// Relation check of the atomic family.
    VerifyCk,
    /// Kernel of the atomic representation on level `--level`.
    Injectivity,
    /// Represented norms against block norms on level `--level` (acyclic graphs).
    Isometry {
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// V-operator identities and the Φ₀ norm chain.
    Uniqueness {
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Matrix blocks of the level-`--level` core.
    FixedPoint,
    /// Bundled showcase.
    Demo {
        /// Read the showcase graphs from this directory instead of the
        /// embedded copies.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Normalize { .. } => "normalize",
            Command::Mul { .. } => "mul",
            Command::Phi { .. } => "phi",
            Command::Gauge { .. } => "gauge",
            Command::Decompose => "decompose",
            Command::CompleteCk { .. } => "complete-ck",
            Command::Desingularize { .. } => "desingularize",
            Command::CkSubgraph { .. } => "ck-subgraph",
            Command::Represent { .. } => "represent",
            Command::Norm { .. } => "norm",
            Command::VerifyCk => "verify-ck",
            Command::Injectivity => "injectivity",
            Command::Isometry { .. } => "isometry",
            Command::Uniqueness { .. } => "uniqueness",
            Command::FixedPoint => "fixed-point",
            Command::Demo { .. } => "demo",
        }
    }
}

impl Cli {
    pub fn effective_seed(&self) -> Result<u64, String> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var("LPGA_SEED") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| format!("LPGA_SEED is not an integer: `{v}`")),
            Err(_) => Ok(0),
        }
    }
}
