//! `bonnesen`: run geometry tasks from a JSON scenario.
//!
//! Exit codes: 0 success, 2 invalid input, 3 failed check, 4 I/O error.

mod commands;
mod error;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bonnesen_core::io::read_text;
use error::CliError;
use scenario::{Format, Scenario, Task};

#[derive(Debug, Parser)]
#[command(
    name = "bonnesen",
    version,
    about = "Bonnesen-type inequalities, curvature flow and integral geometry for convex curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (JSON); omitted fields take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed for random curves, gauges and Monte Carlo sampling.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, global = true, value_name = "N")]
    samples: Option<u64>,
    /// Number of angle-grid nodes.
    #[arg(long, global = true, value_name = "N")]
    grid: Option<usize>,
    /// Write every artifact into this directory instead of printing the main one.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Print the effective scenario and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Length, area, Minkowski length, alpha, deficit and Bonnesen roots.
    Info,
    /// Run the weighted curve-shortening flow.
    Flow,
    /// Minimal annulus, inradius and outradius.
    Annulus,
    /// Positive-center audit at the annulus center or `audit.origin`.
    Audit,
    /// Monte Carlo integral-geometry estimates.
    Mc,
    /// Region balance of the averaging argument at both annulus radii.
    Balance,
    /// Full verification chain; exits 3 if any check fails.
    Pipeline,
    /// Bonnesen functional over a range of radii.
    Sweep,
}

impl Command {
    fn task(self) -> Task {
        match self {
            Command::Info => Task::Info,
            Command::Flow => Task::Flow,
            Command::Annulus => Task::Annulus,
            Command::Audit => Task::Audit,
            Command::Mc => Task::Mc,
            Command::Balance => Task::Balance,
            Command::Pipeline => Task::Pipeline,
            Command::Sweep => Task::Sweep,
        }
    }
}

fn load_scenario(cli: &Cli) -> Result<Scenario, CliError> {
    let mut s: Scenario = match &cli.config {
        Some(path) => serde_json::from_str(&read_text(path)?)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?,
        None => Scenario::default(),
    };
    if let Some(seed) = cli.seed {
        s.seed = seed;
    }
    if let Some(n) = cli.samples {
        s.mc.n_samples = n;
    }
    if let Some(n) = cli.grid {
        s.grid = n;
    }
    if let Some(dir) = &cli.out {
        s.output.dir = Some(dir.clone());
    }
    if let Some(f) = cli.format {
        s.output.format = f;
    }
    let task = cli.command.task();
    match s.task {
        Some(t) if t != task => {
            return Err(CliError::Validation(format!("scenario task {t:?} does not match subcommand {task:?}")))
        }
        _ => s.task = Some(task),
    }
    Ok(s)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let scenario = load_scenario(cli)?;
    if cli.print_config {
        println!("{}", serde_json::to_string_pretty(&scenario)?);
        return Ok(());
    }
    let setup = scenario.setup()?;
    let mut failure = None;
    let artifacts = match cli.command {
        Command::Info => commands::info(&setup)?,
        Command::Flow => commands::flow(&scenario, &setup)?,
        Command::Annulus => commands::annulus(&setup)?,
        Command::Audit => commands::audit(&scenario, &setup)?,
        Command::Mc => commands::mc(&scenario, &setup)?,
        Command::Balance => commands::balance(&scenario, &setup)?,
        Command::Sweep => commands::sweep(&scenario, &setup)?,
        Command::Pipeline => {
            let (artifacts, ok) = commands::pipeline(&scenario, &setup)?;
            if !ok {
                failure = Some(commands::describe_failures(&artifacts));
            }
            artifacts
        }
    };
    output::emit(&artifacts, scenario.output.dir.as_ref(), scenario.output.format)?;
    match failure {
        Some(msg) => Err(CliError::Assertion(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
