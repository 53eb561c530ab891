use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ellcf_cli::{execute, Command, Grid, RouteKind, RunConfig};

#[derive(Parser)]
#[command(
    name = "ellcf",
    version,
    about = "Characteristic functions of elliptical and skew-elliptical laws"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the CF on a grid for each requested route.
    Eval(Common),
    /// Evaluate several routes and check their deviations.
    Compare(Common),
    /// Draw a sample from the spec.
    Sample(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    spec: PathBuf,
    /// axis:<coord>:<start>:<stop>:<count>, ray:<d1,..>:<start>:<stop>:<count> or list:<v1>;<v2>
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value = "closed")]
    routes: String,
    /// Monte Carlo sample size (sample size for `sample`).
    #[arg(long, default_value_t = 100_000)]
    mc_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Tolerance between deterministic routes.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, hide = true, default_value_t = 0.0)]
    perturb_closed: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, c) = match cli.command {
        Cmd::Eval(c) => (Command::Eval, c),
        Cmd::Compare(c) => (Command::Compare, c),
        Cmd::Sample(c) => (Command::Sample, c),
    };
    let parsed = (|| {
        let grid = c.grid.as_deref().map(Grid::parse).transpose()?;
        let routes = RouteKind::parse_list(&c.routes)?;
        Ok::<_, ellcf_cli::CliError>((grid, routes))
    })();
    let (grid, routes) = match parsed {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cfg = RunConfig {
        command,
        spec_path: c.spec,
        grid,
        routes,
        mc_count: c.mc_count,
        seed: c.seed,
        out_path: c.out,
        workers: c.workers,
        tol: c.tol,
        closed_perturbation: c.perturb_closed,
    };
    ExitCode::from(execute(&cfg) as u8)
}
