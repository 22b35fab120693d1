//! `sobolev-curves`: solve, check and render paths of curves.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sobolev_curves::elastica::{optimize_elastica_path, OptimizeOptions};
use sobolev_curves::io::{self, load_endpoints, load_path, save_path};
use sobolev_curves::render::render_svg;
use sobolev_curves::report::check_path;
use sobolev_curves::special_geodesics::{solve_concentric_geodesic, solve_helix_geodesic};
use sobolev_curves::{Error, Path, Result, Space};

const DEFAULT_ELASTICA_S: usize = 17;
const DEFAULT_ELASTICA_T: usize = 64;

#[derive(Parser, Debug)]
#[command(
    name = "sobolev-curves",
    version,
    about = "Geodesic and horizontal paths of curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Grid {
    /// Curves along the path.
    #[arg(long, default_value_t = 64)]
    s_samples: usize,
    /// Samples per curve.
    #[arg(long, default_value_t = 256)]
    t_samples: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Geodesic between concentric circles of radii r0 and r1.
    Circles {
        /// Curvature of the surface; selects plane, sphere or hyperbolic plane.
        #[arg(long, allow_hyphen_values = true)]
        curvature: f64,
        #[arg(long)]
        r0: f64,
        #[arg(long)]
        r1: f64,
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        out: PathBuf,
        /// Also write the radius trajectory as CSV.
        #[arg(long)]
        traj: Option<PathBuf>,
    },
    /// Geodesic between coaxial helices of equal pitch.
    Helices {
        #[arg(long, allow_hyphen_values = true)]
        pitch: f64,
        #[arg(long)]
        r0: f64,
        #[arg(long)]
        r1: f64,
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        traj: Option<PathBuf>,
    },
    /// Energy-minimizing path between two elastica.
    Elastica {
        /// Endpoint JSON file.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 3)]
        control_points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides the endpoint file.
        #[arg(long)]
        s_samples: Option<usize>,
        /// Overrides the endpoint file.
        #[arg(long)]
        t_samples: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Energy trace CSV.
        #[arg(long)]
        trace: PathBuf,
    },
    /// Variation, horizontality and speed diagnostics of a stored path.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Prints the Sobolev length of a stored path.
    Distance {
        #[arg(long)]
        input: PathBuf,
    },
    /// Writes an SVG figure of a stored path.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn write_text(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

/// `x` with 12 significant digits.
fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Circles {
            curvature,
            r0,
            r1,
            grid,
            out,
            traj,
        } => {
            let space = Space::surface_with_curvature(curvature)?;
            let (t, path) =
                solve_concentric_geodesic(space, r0, r1, grid.s_samples, grid.t_samples)?;
            save_path(&out, &path)?;
            if let Some(csv) = traj {
                write_text(&csv, &io::trajectory_csv(&t)?)?;
            }
            eprintln!("distance {}", significant(t.distance, 12));
        }
        Command::Helices {
            pitch,
            r0,
            r1,
            grid,
            out,
            traj,
        } => {
            let (t, path) = solve_helix_geodesic(r0, r1, pitch, grid.s_samples, grid.t_samples)?;
            save_path(&out, &path)?;
            if let Some(csv) = traj {
                write_text(&csv, &io::trajectory_csv(&t)?)?;
            }
            eprintln!("distance {}", significant(t.distance, 12));
        }
        Command::Elastica {
            spec,
            control_points,
            seed,
            s_samples,
            t_samples,
            out,
            trace,
        } => {
            let json = load_endpoints(&spec)?;
            let endpoints = json
                .to_endpoints::<f64>()
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            let m = s_samples.or(json.s_samples).unwrap_or(DEFAULT_ELASTICA_S);
            let n = t_samples.or(json.t_samples).unwrap_or(DEFAULT_ELASTICA_T);
            let opts = OptimizeOptions {
                seed,
                ..OptimizeOptions::default()
            };
            let res = optimize_elastica_path(endpoints, control_points, m, n, &opts)?;
            save_path(&out, &res.path)?;
            write_text(&trace, &io::trace_csv(&res.trace)?)?;
            eprintln!(
                "energy {} after {} evaluations",
                significant(res.energy, 12),
                res.evaluations
            );
        }
        Command::Check { input, report } => {
            let path: Path = load_path(&input)?;
            let r = check_path(&path)?;
            io::write_json(&report, &r)?;
        }
        Command::Distance { input } => {
            let path: Path = load_path(&input)?;
            println!("{}", significant(path.length()?, 12));
        }
        Command::Render { input, out } => {
            let path: Path = load_path(&input)?;
            write_text(&out, &render_svg(&path))?;
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numeric() {
        return 2;
    }
    match e {
        Error::InvalidInput(_) | Error::Json(_) => 3,
        Error::AtSample { source, .. } => exit_code(source),
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
