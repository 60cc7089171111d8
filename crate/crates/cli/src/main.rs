//! `upsilon`: batch front end for the eigenvalue-inequality library.
//!
//! Exit codes: 0 success, 2 invalid input or I/O, 3 numeric convergence
//! failure, 4 internal inconsistency. Set `RAYON_NUM_THREADS` to bound the
//! worker pool; results do not depend on it.

mod commands;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use upsilon_core::karea::DualityOptions;

use commands::{emit, parse_err, CliError, Format};

#[derive(Parser)]
#[command(name = "upsilon", version, about = "Eigenvalue inequalities for products in SU(n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gromov-Witten number of Schubert classes in Gr(r, n).
    Gw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Index sets, e.g. `1,2;1,3;2,4`.
        #[arg(long)]
        classes: String,
        #[arg(long, default_value_t = 0)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Enumerate the inequalities for SU(n) with l classes as JSON.
    Abw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        /// Largest degree; defaults to the largest one the dimension count allows.
        #[arg(long)]
        d_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        d_min: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate Upsilon_l and compare with the certified lower bound.
    Upsilon {
        /// Expected SU(n); checked against the classes.
        #[arg(long)]
        n: Option<usize>,
        /// Alcove points, e.g. `0.3,0,-0.3;0.2,0.1,-0.3`.
        #[arg(long, conflicts_with = "su2", required_unless_present = "su2")]
        classes: Option<String>,
        /// SU(2) class parameters in [0, 1/2], e.g. `0.1,0.1,0.3`.
        #[arg(long)]
        su2: Option<String>,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare the minimized curvature norm with the class distance.
    Karea {
        #[arg(long)]
        zeta1: String,
        #[arg(long)]
        zeta2: String,
        /// `S` or `SxT`.
        #[arg(long, default_value = "200", value_parser = parse::mesh)]
        mesh: (usize, usize),
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        /// Number of candidate connections.
        #[arg(long, default_value_t = 8)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample tuples whose product is the identity and check every inequality.
    Montecarlo {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        d_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gw {
            n,
            r,
            classes,
            d,
            format,
        } => {
            let classes = parse::subsets(&classes, n).map_err(parse_err("classes"))?;
            emit(None, &commands::gw(n, r, &classes, d, format)?)
        }
        Command::Abw {
            n,
            l,
            d_max,
            d_min,
            out,
        } => emit(out.as_deref(), &commands::abw(n, l, d_min, d_max)?),
        Command::Upsilon {
            n,
            classes,
            su2,
            budget,
            seed,
            format,
        } => {
            let points = match (classes, su2) {
                (Some(c), _) => parse::alcove_points(&c).map_err(parse_err("classes"))?,
                (None, Some(z)) => parse::su2_parameters(&z).map_err(parse_err("su2"))?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            if let Some(n) = n {
                if let Some(p) = points.iter().find(|p| p.n() != n) {
                    return Err(CliError::Core(upsilon_core::Error::Validation(format!(
                        "class {p} is not an SU({n}) class"
                    ))));
                }
            }
            let (text, failure) = commands::upsilon(points, budget, seed, format)?;
            emit(None, &text)?;
            failure.map_or(Ok(()), Err)
        }
        Command::Karea {
            zeta1,
            zeta2,
            mesh,
            epsilon,
            budget,
            seed,
        } => {
            let z1 = parse::alcove_point(&zeta1).map_err(parse_err("zeta1"))?;
            let z2 = parse::alcove_point(&zeta2).map_err(parse_err("zeta2"))?;
            let options = DualityOptions {
                mesh,
                epsilon,
                budget,
                seed,
            };
            emit(None, &commands::karea(&z1, &z2, &options)?)
        }
        Command::Montecarlo {
            n,
            l,
            samples,
            d_max,
            seed,
            out,
        } => {
            let (text, failure) = commands::montecarlo(n, l, samples, d_max, seed)?;
            emit(out.as_deref(), &text)?;
            failure.map_or(Ok(()), Err)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("upsilon: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
