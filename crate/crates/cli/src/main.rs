use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ri_et_cli::{execute_run, execute_sweep, load_config, output, CliResult};

/// Repeated-interaction and Lindblad simulations of electron transfer.
#[derive(Parser)]
#[command(name = "ri-et", version)]
struct Cli {
    /// Directory for CSV files and the manifest (overrides the config).
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, env = "RI_ET_THREADS", default_value_t = 0)]
    threads: usize,
    /// Accepted for compatibility; every engine is deterministic.
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single simulation.
    Run { config: PathBuf },
    /// Run the sweep declared in the config.
    Sweep { config: PathBuf },
    /// Print the preset parameter sets.
    Presets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    let _ = cli.seedless;
    let (config, sweep) = match &cli.command {
        Command::Presets => {
            print!("{}", output::presets_table());
            return Ok(());
        }
        Command::Run { config } => (config, false),
        Command::Sweep { config } => (config, true),
    };
    let cfg = load_config(config)?;
    let dir = cli.output_dir.clone().unwrap_or_else(|| cfg.output_dir.clone());
    let files = if sweep {
        if cfg.sweep.is_none() {
            return Err(ri_et_cli::CliError::Config { field: "sweep", message: "missing; nothing to sweep".into() });
        }
        execute_sweep(&cfg, &dir, cli.threads)?
    } else {
        execute_run(&cfg, &dir)?
    };
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}
