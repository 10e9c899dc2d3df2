//! `polya-lab`: Laplace spectra and Pólya-inequality checks from the command line.
//!
//! Exit status: 0 when every requested check passes, 1 on an inequality
//! violation, 2 on input or configuration errors, 3 when the eigensolver does
//! not converge.

mod commands;
mod config;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polya_core::spectra::BoundaryCondition;
use polya_core::Execution;

#[derive(Parser, Debug)]
#[command(name = "polya-lab", version, about = "Laplace spectra and Pólya inequality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues of a domain (closed form or finite elements).
    Spectrum(SpectrumArgs),
    /// Counting function N(λ) on a λ grid.
    Count(CountArgs),
    /// Check an eigenvalue inequality.
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
    /// Generate or validate catalog tilings.
    Tile {
        #[command(subcommand)]
        action: TileCommand,
    },
    /// Reflection extension operator checks.
    Extension {
        #[command(subcommand)]
        action: ExtensionCommand,
    },
    /// Replay the tiling argument for the Neumann lower bound.
    Prove(ProveArgs),
    /// Refinement study with observed order and extrapolation.
    Convergence(ConvergenceArgs),
    /// Run a command described by a TOML file.
    Run {
        config: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SolverArgs {
    /// Uniform refinement level for polygon meshes.
    #[arg(long, default_value_t = 4)]
    pub refine: u32,
    /// Eigensolver residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Domain JSON file.
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long, value_enum)]
    pub bc: Bc,
    /// Number of eigenvalues.
    #[arg(short = 'k', long = "count", conflicts_with = "lambda_max")]
    pub k: Option<usize>,
    /// Every eigenvalue below this value.
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output file; `.csv` gives `index,eigenvalue,error_bound` rows, anything else JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long, value_enum)]
    pub bc: Bc,
    /// `x`, `a:step:b`, `log:a:b:n` or a comma list.
    #[arg(long)]
    pub lambda: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GridCheckArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long)]
    pub lambda: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FriedlanderArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub k_max: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FaberKrahnArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WeylArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long, value_enum)]
    pub bc: Bc,
    #[arg(long)]
    pub lambda: String,
    /// Accepted band `lo,hi` for the ratio at the largest λ
    /// (default 1,1.05 for Neumann and 0.95,1 for Dirichlet).
    #[arg(long)]
    pub band: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CheckKind {
    /// N_D(λ) ≤ Weyl term.
    PolyaDirichlet(GridCheckArgs),
    /// N_N(λ) ≥ Weyl term.
    PolyaNeumann(GridCheckArgs),
    /// N_D(λ) ≤ ((d+2)/d)^{d/2} · Weyl term.
    LiYau(GridCheckArgs),
    /// N_N(λ) ≥ 2/(d+2) · Weyl term.
    Kroger(GridCheckArgs),
    /// μ_{k+1} ≤ λ_k.
    Friedlander(FriedlanderArgs),
    /// λ₁ at least that of the disk of equal area.
    FaberKrahn(FaberKrahnArgs),
    /// N(λ) / Weyl term.
    Weyl(WeylArgs),
}

#[derive(Args, Debug)]
pub struct TileSource {
    /// Tiling JSON written by `tile generate`.
    #[arg(long, conflicts_with = "shape")]
    pub tiling: Option<PathBuf>,
    #[arg(long)]
    pub shape: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Half-width of the square window centred at the origin.
    #[arg(long, default_value_t = 4.0)]
    pub window: f64,
}

#[derive(Subcommand, Debug)]
pub enum TileCommand {
    Generate {
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 4.0)]
        window: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Validate {
        #[command(flatten)]
        source: TileSource,
        /// Samples per axis.
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExtensionCommand {
    Check {
        #[arg(long = "d", default_value_t = 2)]
        dim: usize,
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        #[arg(long = "R", default_value_t = 0.5)]
        r: f64,
        #[arg(long, default_value_t = 1.0 / 128.0)]
        h: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the first extended field as PREFIX.json + PREFIX.bin.
        #[arg(long)]
        dump_field: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct ProveArgs {
    /// Catalog shape name or a tiling JSON file.
    #[arg(long)]
    pub tiling: String,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long)]
    pub lambda: f64,
    /// Comma-separated cube half-widths.
    #[arg(long = "L", default_value = "8,32,1024")]
    pub l: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV with columns L,defect,lower_bound,weyl_term,N_self.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long, value_enum)]
    pub bc: Bc,
    #[arg(short = 'k', long = "count", default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value = "2,3,4,5")]
    pub levels: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV with columns level,h,eig_1..eig_k.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn execution() -> anyhow::Result<Execution> {
    let threads = match std::env::var("POLYA_LAB_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| anyhow::anyhow!("POLYA_LAB_THREADS must be a positive integer, got '{v}'"))?,
        ),
        Err(_) => None,
    };
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    Ok(match threads {
        Some(1) => Execution::Sequential,
        _ => Execution::Parallel,
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<polya_core::Error>() {
        Some(polya_core::Error::NonConvergence { .. }) => 3,
        Some(polya_core::Error::BoundViolated(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execution().and_then(|exec| match cli.command {
        Command::Run { config } => {
            let args = config::config_to_args(&config)?;
            let inner = Cli::try_parse_from(&args).map_err(|e| anyhow::anyhow!("invalid config {}: {e}", config.display()))?;
            commands::dispatch(inner.command, exec)
        }
        other => commands::dispatch(other, exec),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
