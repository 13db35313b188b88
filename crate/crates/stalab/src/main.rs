use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use stalab::config::SimulationConfig;
use stalab::verify::{self, VerifyOptions};
use stalab::{write_figure, Figure, Grid, SweepSpec};
use stalab_core::{IntegratorConfig, LzSchedule};

#[derive(Parser)]
#[command(name = "stalab", version, about = "Substitute counterdiabatic driving of a Landau-Zener sweep")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one propagation described by a JSON config and print its populations as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the CSV dataset of one figure (fig1a..fig6).
    Figure {
        figure: Figure,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Final time; the window is [-tf, tf].
        #[arg(long, default_value_t = 1.0)]
        tf: f64,
        #[arg(long, default_value_t = 9.0)]
        zeta2: f64,
        /// Sweep values as start:end:points.
        #[arg(long)]
        grid: Option<Grid>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Eigenstate (1 or 2) started in and protected by the non-Hermitian runs.
        #[arg(long)]
        protect: Option<usize>,
        /// RK4 step.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    /// Run the acceptance checks.
    Verify {
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate { config, out } => {
            let table = SimulationConfig::load(&config)?.run()?;
            match out {
                Some(path) => {
                    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    table.write(io::BufWriter::new(file))?;
                }
                None => table.write(io::stdout().lock())?,
            }
            Ok(true)
        }
        Command::Figure { figure, out, tf, zeta2, grid, workers, protect, step } => {
            let schedule = LzSchedule::symmetric(1.0, zeta2, 0.0, tf)?;
            let spec =
                SweepSpec { figure, grid, schedule, integrator: IntegratorConfig::with_step(step), protect, workers };
            let path = write_figure(&spec, &out)?;
            eprintln!("wrote {}", path.display());
            Ok(true)
        }
        Command::Verify { report, workers } => {
            let opts = VerifyOptions { workers, ..VerifyOptions::default() };
            let result = verify::verify(&opts);
            let mut stdout = io::stdout().lock();
            for c in &result.criteria {
                writeln!(stdout, "{}", c.summary())?;
            }
            if let Some(path) = report {
                fs::write(&path, result.to_json()).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(result.pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
