//! Command-line front end for the tree-harmonic toolkit.
//!
//! Subcommands: `spherical` (evaluator tables), `certify` (non-Wiener
//! certificates), `repcheck` (representation property battery), `weyl`
//! (root-system reports), `verify` (independent certificate re-check).
//!
//! Exit codes: 0 for a pass or a certified verdict, 1 for a negative
//! verdict or failed checks, 2 for usage and input errors. Output is
//! deterministic: identical configurations produce identical bytes.

mod commands;
mod fmt;
mod reports;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "treeharmonic",
    version,
    about = "Harmonic analysis on semi-regular trees: spherical functions, boundary representations, non-Wiener certificates, Weyl-orbit checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the spherical function by both evaluators over a parameter list.
    Spherical(SphericalArgs),
    /// Run the non-Wiener certification pipeline at one spectral parameter.
    Certify(CertifyArgs),
    /// Run the boundary-representation property battery.
    Repcheck(RepcheckArgs),
    /// Report a root system, its Weyl group and the axis constraint.
    Weyl(WeylArgs),
    /// Re-verify the witness embedded in a certificate file.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TreeArgs {
    /// Degree of type-A vertices (>= 2).
    #[arg(long)]
    d1: u32,
    /// Degree of type-B vertices (>= 3).
    #[arg(long)]
    d2: u32,
}

#[derive(Args)]
struct SphericalArgs {
    #[command(flatten)]
    tree: TreeArgs,
    /// Spectral parameters, e.g. 0.5 or 0.25+0.7i (repeatable, comma-separable).
    #[arg(long = "z", value_parser = fmt::parse_complex, value_delimiter = ',')]
    z: Vec<Complex64>,
    /// Grid of parameters: re_min:re_max:im_min:im_max:steps.
    #[arg(long = "z-grid")]
    z_grid: Option<String>,
    /// Largest distance to tabulate.
    #[arg(long = "n-max", default_value_t = 10)]
    n_max: usize,
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    tree: TreeArgs,
    /// Spectral parameter to certify.
    #[arg(long = "z", value_parser = fmt::parse_complex)]
    z: Complex64,
    /// Gram-matrix radius of the witness search.
    #[arg(long, default_value_t = 6)]
    radius: usize,
    /// Congruence tolerance of the exceptional-set check.
    #[arg(long = "tol-congruence", default_value_t = 1e-12)]
    tol_congruence: f64,
    /// Tolerance of the lambda-level Hermitian test.
    #[arg(long = "tol-lambda", default_value_t = 1e-12)]
    tol_lambda: f64,
    /// Required imaginary part of a non-real witness value.
    #[arg(long = "tol-witness", default_value_t = 1e-6)]
    tol_witness: f64,
    /// Eigenvalue floor of the positive-semidefiniteness test.
    #[arg(long = "tol-psd", default_value_t = 1e-10)]
    tol_psd: f64,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RepcheckArgs {
    #[command(flatten)]
    tree: TreeArgs,
    /// Cylinder-space depth (the displacement budget plus 2 is a safe choice).
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Support radius of the compression functions.
    #[arg(long, default_value_t = 4)]
    radius: usize,
    /// Seed of the deterministic element sampler.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of composable pairs in the homomorphism check.
    #[arg(long, default_value_t = 50)]
    pairs: usize,
    /// Elements per real part in the isometry check.
    #[arg(long = "isometry-samples", default_value_t = 7)]
    isometry_samples: usize,
    /// Elements in the unitarity and coefficient checks.
    #[arg(long = "element-samples", default_value_t = 12)]
    element_samples: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WeylArgs {
    /// Root system type: A, B, C, D or G2.
    #[arg(long)]
    system: String,
    /// Rank (at most 4).
    #[arg(long)]
    rank: usize,
    /// Parameters for the axis constraint (repeatable).
    #[arg(long = "z", value_parser = fmt::parse_complex, value_delimiter = ',')]
    z: Vec<Complex64>,
    /// Grid of parameters: re_min:re_max:im_min:im_max:steps.
    #[arg(long = "z-grid")]
    z_grid: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate file produced by `certify`.
    certificate: PathBuf,
    /// Agreement required between the recorded and recomputed values.
    #[arg(long = "tol-verify", default_value_t = 1e-9)]
    tol_verify: f64,
}

fn configure_threads() {
    if let Ok(value) = std::env::var("TREEHARMONIC_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn main() {
    configure_threads();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Spherical(args) => commands::spherical(args),
        Command::Certify(args) => commands::certify(args),
        Command::Repcheck(args) => commands::repcheck(args),
        Command::Weyl(args) => commands::weyl(args),
        Command::Verify(args) => commands::verify(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(error) => {
            eprintln!("error: {error:#}");
            std::process::exit(2);
        }
    }
}
