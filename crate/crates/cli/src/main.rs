mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Check suites for Euler elements, wedge domains, modular objects and Hardy-space models.
#[derive(Parser, Debug)]
#[command(name = "wedgelab", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every pseudo-random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Optional CSV output (point clouds, evaluation values).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure checks of an algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// Euler element test.
    Euler {
        #[command(subcommand)]
        action: EulerAction,
    },
    /// 3-grading of an Euler element.
    Grading(ElementArgs),
    /// Sampled invariant cone in sl(2, R).
    Cone {
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Positivity-domain point clouds.
    Wedge {
        #[command(subcommand)]
        action: WedgeAction,
    },
    /// KMS wedge domain against the positivity domain on de Sitter space.
    Kms {
        #[command(subcommand)]
        action: KmsAction,
    },
    /// Subsemigroup check for the group-case wedge of SL(2, R).
    Semigroup {
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Reproducing-kernel checks for the Hardy models.
    Kernel {
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Modular membership of smeared boundary vectors.
    Membership {
        #[command(subcommand)]
        model: MembershipModel,
    },
    /// Affine net of real subspaces on the half-plane.
    Net {
        #[command(subcommand)]
        action: NetAction,
    },
    /// Standard subspace / modular pair roundtrips.
    Modular {
        #[command(subcommand)]
        action: ModularAction,
    },
    /// Structural validation of an algebra or modular-pair JSON file.
    Validate { path: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraArgs {
    /// Built-in algebra: sl2, su11, so1,d or so2,d.
    #[arg(long, conflicts_with = "file")]
    pub algebra: Option<String>,
    /// Algebra JSON document.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ElementArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    /// Named element (h, e, f, euler, boost, ...).
    #[arg(long, conflicts_with = "coeffs")]
    pub element: Option<String>,
    /// Basis coefficients, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
pub enum AlgebraAction {
    Check(AlgebraArgs),
}

#[derive(Subcommand, Debug)]
pub enum EulerAction {
    Check(ElementArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Ds,
    Ads,
}

#[derive(Subcommand, Debug)]
pub enum WedgeAction {
    Sample {
        #[arg(long, value_enum, default_value_t = Space::Ds)]
        space: Space,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum KmsAction {
    Sample {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Side of the coarse strip grid.
        #[arg(long, default_value_t = 11)]
        grid: usize,
        /// Side of the refined strip grid.
        #[arg(long, default_value_t = 21)]
        fine_grid: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Strip,
    Halfplane,
}

#[derive(Subcommand, Debug)]
pub enum KernelAction {
    Gram {
        #[arg(long, value_enum, default_value_t = Model::Strip)]
        model: Model,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Regularizations for the strip boundary Gram.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-2, 1e-3, 1e-4])]
        eps: Vec<f64>,
    },
    Identities {
        #[arg(long, value_enum, default_value_t = Model::Strip)]
        model: Model,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct MembershipArgs {
    /// Support interval of the bump.
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["A", "B"])]
    pub support: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2048)]
    pub nodes: usize,
    /// Global phase: one, i, wedge (e^{-iπ/4}) or an angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub phase: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum MembershipModel {
    Strip(MembershipArgs),
    Halfplane(MembershipArgs),
}

#[derive(Subcommand, Debug)]
pub enum NetAction {
    Check {
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        /// Finest dyadic level for the isotony pairs.
        #[arg(long, default_value_t = 3)]
        finest: i32,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModularAction {
    Roundtrip {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Random modular pairs for the complement identity.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("wedgelab: {e}");
            ExitCode::from(2)
        }
    }
}
