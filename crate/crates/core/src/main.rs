use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nbody_majorants::cli::{
    self, CompareOptions, GlobalOpts, IntegrateOptions, RadiiOptions, SeriesFamily, SeriesOptions,
    ValidateOptions,
};
use nbody_majorants::nbody::RenormKind;

/// Majorant series, certified radii and local-error bounds for the
/// gravitational N-body problem, with a fixed-step renormalized integrator.
#[derive(Parser)]
#[command(name = "nbody-majorants", version, about)]
struct Cli {
    /// Output directory (default: $NBODY_MAJORANTS_OUT or ./out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance for radius computations and consistency checks
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Truncation degree for series constructions
    #[arg(long, global = true, default_value_t = 60)]
    order: usize,
    /// Seed for randomized property sweeps
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print and save the certified radii table
    Radii {
        /// Comma-separated eta0 grid
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        eta0: Vec<f64>,
    },
    /// Print and save majorant series coefficients
    Series {
        #[arg(long, value_enum)]
        which: WhichSeries,
        #[arg(long, default_value_t = 0.0)]
        mu0: f64,
        #[arg(long, default_value_t = 1.0)]
        nu0: f64,
        #[arg(long, default_value_t = 0.5)]
        eta0: f64,
    },
    /// Integrate a preset or a system file with fixed steps
    Integrate(IntegrateArgs),
    /// Physical vs renormalized integration with equal step counts
    Compare(CompareArgs),
    /// Randomized dominance and inequality sweeps
    ValidateBounds {
        /// Number of random states for the dominance sweep
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Taylor expansion order for the dominance checks
        #[arg(long, default_value_t = 10)]
        taylor_order: usize,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum WhichSeries {
    Rho,
    Lambda,
    XiZeta,
    Midpoint,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum RenormArg {
    Original,
    Cheap,
    Pnorm,
    Energy,
    Physical,
}

impl From<RenormArg> for RenormKind {
    fn from(value: RenormArg) -> Self {
        match value {
            RenormArg::Original => RenormKind::Original,
            RenormArg::Cheap => RenormKind::Cheap,
            RenormArg::Pnorm => RenormKind::PNorm,
            RenormArg::Energy => RenormKind::Energy,
            RenormArg::Physical => RenormKind::Physical,
        }
    }
}

#[derive(Args)]
struct IntegrateArgs {
    /// Full options as a JSON file instead of flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bundled initial state: two-body-circular, two-body-e99, figure-eight
    #[arg(long, conflicts_with = "system")]
    preset: Option<String>,
    /// JSON system file
    #[arg(long)]
    system: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "original")]
    renorm: RenormArg,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    /// Gauss collocation stages (1 = implicit midpoint, order 2s)
    #[arg(long, default_value_t = 1)]
    stages: usize,
    /// Step in the integration variable
    #[arg(long, required_unless_present = "config")]
    step: Option<f64>,
    #[arg(long, required_unless_present = "config")]
    nsteps: Option<usize>,
    #[arg(long, default_value_t = 1e-14)]
    fp_tol: f64,
    /// Cap on fixed-point sweeps per step
    #[arg(long, default_value_t = 100)]
    fp_maxiter: usize,
    /// Label appended to the trajectory file name
    #[arg(long, default_value = "run")]
    tag: String,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, conflicts_with = "system")]
    preset: Option<String>,
    #[arg(long)]
    system: Option<PathBuf>,
    /// Renormalization for the fictitious-time run
    #[arg(long, value_enum, default_value = "pnorm")]
    renorm: RenormArg,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    stages: usize,
    /// Step count, the same for both runs
    #[arg(long)]
    nsteps: usize,
    /// Physical-time step
    #[arg(long)]
    dt: f64,
    /// Fictitious-time step
    #[arg(long)]
    dtau: f64,
    /// Cap on fixed-point sweeps per step
    #[arg(long, default_value_t = 100)]
    fp_maxiter: usize,
    /// Also write certified bounds next to the renormalized local errors
    #[arg(long, default_value_t = false)]
    certify: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = GlobalOpts::default();
    if let Some(out) = cli.out {
        opts.out_dir = out;
    }
    opts.tol = cli.tol;
    opts.order = cli.order;
    opts.seed = cli.seed;

    let outcome = match cli.command {
        Command::Radii { eta0 } => cli::cmd_radii(&opts, &RadiiOptions { eta0 }).map(|_| true),
        Command::Series {
            which,
            mu0,
            nu0,
            eta0,
        } => {
            let which = match which {
                WhichSeries::Rho => SeriesFamily::Rho,
                WhichSeries::Lambda => SeriesFamily::Lambda,
                WhichSeries::XiZeta => SeriesFamily::XiZeta,
                WhichSeries::Midpoint => SeriesFamily::Midpoint,
            };
            cli::cmd_series(
                &opts,
                &SeriesOptions {
                    which,
                    mu0,
                    nu0,
                    eta0,
                },
            )
            .map(|_| true)
        }
        Command::Integrate(a) => {
            let io = if let Some(path) = &a.config {
                std::fs::read_to_string(path)
                    .map_err(Into::into)
                    .and_then(|text| serde_json::from_str(&text).map_err(Into::into))
            } else {
                Ok(IntegrateOptions {
                    preset: a.preset,
                    system: a.system,
                    renorm: a.renorm.into(),
                    p: a.p,
                    alpha: a.alpha,
                    stages: a.stages,
                    step: a.step.unwrap(),
                    nsteps: a.nsteps.unwrap(),
                    fp_tol: a.fp_tol,
                    fp_maxiter: a.fp_maxiter,
                    tag: a.tag,
                })
            };
            io.and_then(|io| cli::cmd_integrate(&opts, &io))
                .map(|_| true)
        }
        Command::Compare(a) => cli::cmd_compare(
            &opts,
            &CompareOptions {
                preset: a.preset,
                system: a.system,
                renorm: a.renorm.into(),
                p: a.p,
                alpha: a.alpha,
                stages: a.stages,
                nsteps: a.nsteps,
                dt: a.dt,
                dtau: a.dtau,
                fp_maxiter: a.fp_maxiter,
                certify: a.certify,
            },
        )
        .map(|_| true),
        Command::ValidateBounds {
            trials,
            taylor_order,
        } => cli::cmd_validate_bounds(
            &opts,
            &ValidateOptions {
                trials,
                taylor_order,
            },
        )
        .map(|(_, clean)| clean),
    };

    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation found violations; see the output table");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
