use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "nctorus", version, about = "Noncommutative torus and Heisenberg-plane toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Phase q as JSON: {"rational":[p,N]} or {"theta":x}.
    #[arg(long, global = true, value_name = "JSON")]
    pub q: Option<String>,
    /// Planck constant.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    /// Tolerance for the checks a subcommand performs.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Samples per axis of generated grids.
    #[arg(long = "grid-n", global = true)]
    pub grid_n: Option<usize>,
    /// Half extent of generated grids.
    #[arg(long = "grid-extent", global = true)]
    pub grid_extent: Option<f64>,
    /// Series order, or seminorm order for `torus-seminorm`.
    #[arg(long, global = true, value_name = "K")]
    pub order: Option<u32>,
}

/// Inputs are file paths or inline JSON.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// q-twisted product of two elements, or normal ordering of a word.
    TorusMul {
        #[arg(num_args = 0..=2)]
        inputs: Vec<String>,
        /// {"n": generators, "word": [[index, exponent], ...]}.
        #[arg(long, value_name = "JSON", conflicts_with = "inputs")]
        reorder: Option<String>,
    },
    /// Adjoint, trace, ℓ² state and primed coefficients.
    TorusAdjoint { input: String },
    /// Lattice seminorm of order `--order`, and the smooth seminorm of a word.
    TorusSeminorm {
        input: String,
        /// [[m, n], ...] powers of D_U, D_V applied right to left.
        #[arg(long, value_name = "JSON")]
        word: Option<String>,
        /// "trace" or a torus element g for the vector state tr(g* · g).
        #[arg(long, value_name = "JSON")]
        state: Option<String>,
    },
    /// D_U^m D_V^n, ad(a), or a derivation given on the generators.
    TorusDerive {
        input: String,
        /// [m, n].
        #[arg(long, value_name = "JSON", group = "mode")]
        power: Option<String>,
        /// Element a of ad(a).
        #[arg(long, value_name = "JSON", group = "mode")]
        inner: Option<String>,
        /// {"du": lattice, "dv": lattice, "q": ...}.
        #[arg(long, value_name = "JSON", group = "mode")]
        derivation: Option<String>,
    },
    /// Checks the relation D(U)V + U D(V) = q(D(V)U + V D(U)).
    TorusCheckDerivation { input: String },
    /// Clock–shift pair, fiber value and equivariance of a section.
    MatrepEval {
        input: String,
        /// Fiber coordinate u as [re, im].
        #[arg(long, value_name = "JSON")]
        u: Option<String>,
        /// Fiber coordinate v as [re, im].
        #[arg(long, value_name = "JSON")]
        v: Option<String>,
        /// Explicit family [{"k","l","s","t","re","im"}, ...] to check instead.
        #[arg(long, value_name = "JSON")]
        family: Option<String>,
    },
    /// Relations of the noncommutative circle, and evaluation of an element.
    CircleCheck {
        /// {"a", "b", "q"} with optional "a_prime", "b_prime".
        input: String,
        /// [{"j","s","t","re","im"}, ...].
        #[arg(long, value_name = "JSON")]
        element: Option<String>,
        /// Circle point as [re, im].
        #[arg(long, value_name = "JSON")]
        z: Option<String>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Canonical commutator, Weyl relations and group laws on a sampled function.
    WeylCheck {
        input: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.7)]
        t: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1.3)]
        s: f64,
    },
    /// Operator of a lattice measure and the calibrated phase.
    RepLattice {
        input: String,
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        sigma: f64,
        /// Function to act on; a Gaussian by default.
        #[arg(long, value_name = "JSON")]
        probe: Option<String>,
    },
    /// Generator b with ad(b) = D on Q and P.
    SolveInner { input: String },
    /// Twisted convolutions and the maps between them.
    TwistedConv {
        #[arg(num_args = 1..=2, required = true)]
        inputs: Vec<String>,
        #[arg(long, value_enum, default_value_t = ConvChoice::Twisted)]
        kind: ConvChoice,
    },
    /// Moyal or half-Moyal product of two polynomial symbols through `--order`.
    MoyalStar {
        f: String,
        g: String,
        #[arg(long)]
        half: bool,
    },
    /// Discrepancy between the transported convolution and the truncated Moyal series.
    FourierBridge {
        #[arg(num_args = 0..=2)]
        inputs: Vec<String>,
    },
    /// Richardson probe of the ħ-dependence of the twisted convolution.
    HbarProbe {
        #[arg(num_args = 0..=2)]
        inputs: Vec<String>,
        #[arg(long, default_value_t = 1e-2)]
        delta: f64,
    },
    /// Positivity test and GNS triplet of a form on a finite algebra.
    GnsBuild { algebra: String, form: String },
    /// Twisted form f* · f and the Schwarz inequality.
    GnsCheck {
        algebra: String,
        form: String,
        /// Coefficient vector [[re, im], ...] in basis order.
        #[arg(long, value_name = "JSON")]
        element: String,
    },
    /// Runs the acceptance battery.
    Suite {
        /// Restrict to these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvChoice {
    Twisted,
    Symplectic,
    Group,
    Plain,
    Rescaled,
    GaugeForward,
    GaugeInverse,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::TorusMul { .. } => "torus-mul",
            Command::TorusAdjoint { .. } => "torus-adjoint",
            Command::TorusSeminorm { .. } => "torus-seminorm",
            Command::TorusDerive { .. } => "torus-derive",
            Command::TorusCheckDerivation { .. } => "torus-check-derivation",
            Command::MatrepEval { .. } => "matrep-eval",
            Command::CircleCheck { .. } => "circle-check",
            Command::WeylCheck { .. } => "weyl-check",
            Command::RepLattice { .. } => "rep-lattice",
            Command::SolveInner { .. } => "solve-inner",
            Command::TwistedConv { .. } => "twisted-conv",
            Command::MoyalStar { .. } => "moyal-star",
            Command::FourierBridge { .. } => "fourier-bridge",
            Command::HbarProbe { .. } => "hbar-probe",
            Command::GnsBuild { .. } => "gns-build",
            Command::GnsCheck { .. } => "gns-check",
            Command::Suite { .. } => "suite",
        }
    }
}
