use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockline_core::dsl::BoundCircuit;
use fockline_core::elements::CircularConvention;

#[derive(Parser, Debug)]
#[command(
    name = "fockline",
    version,
    about = "Linear-optics circuit simulator in second quantization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a circuit; diagnostics go to standard error.
    Check { file: PathBuf },
    /// Evolve the input state through the circuit and print the result.
    Simulate(RunArgs),
    /// Print the state after the sources and after every element.
    Explain(RunArgs),
    /// Detector statistics for the final state.
    Probs {
        #[command(flatten)]
        run: RunArgs,
        /// Detector modes, comma separated (`3H,4V` or slot names like `5R`);
        /// defaults to every mode, and `--detect ""` selects none.
        #[arg(long, value_delimiter = ',')]
        detect: Option<Vec<String>>,
        /// Modes that must all fire, comma separated; repeatable.
        #[arg(long)]
        coincidence: Vec<String>,
    },
    /// Cross-check the engine against the truncated-Fock oracle.
    Oracle {
        /// Circuit file; omit with `--random`.
        file: Option<PathBuf>,
        #[command(flatten)]
        opts: CommonArgs,
        /// Check this many seeded random circuits instead of a file.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, value_name = "S", default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct RunArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub opts: CommonArgs,
    /// Defaults to `coherent` for circuits with coherent sources and to
    /// `engine` otherwise.
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
}

impl RunArgs {
    pub fn backend_for(&self, bc: &BoundCircuit) -> Backend {
        self.backend.unwrap_or(if bc.has_coherent() {
            Backend::Coherent
        } else {
            Backend::Engine
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Parameter binding `name=value`; the value may be a constant
    /// expression such as `pi/3`. Repeatable.
    #[arg(short = 'p', long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Photons per mode kept by the oracle backend.
    #[arg(long, value_name = "N")]
    pub truncation: Option<u32>,
    /// Amplitudes with modulus below this are dropped.
    #[arg(long, value_name = "E", default_value_t = 1e-12)]
    pub prune_eps: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Circular-polarization convention for `basis RL`.
    #[arg(long, value_enum, default_value_t = Circular::Real)]
    pub circular_basis: Circular,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Engine,
    Coherent,
    Oracle,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Engine => "engine",
            Backend::Coherent => "coherent",
            Backend::Oracle => "oracle",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Circular {
    Real,
    Physical,
}

impl From<Circular> for CircularConvention {
    fn from(c: Circular) -> Self {
        match c {
            Circular::Real => CircularConvention::Real,
            Circular::Physical => CircularConvention::Physical,
        }
    }
}
