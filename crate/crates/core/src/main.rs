use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kuramoto_sync::config::{Mode, RunConfig};
use kuramoto_sync::{presets, runner, Error, Result};

#[derive(Parser)]
#[command(name = "kuramoto-sync", version, about = "Kuramoto and Josephson-array synchronization runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation from a config file or a built-in preset.
    Run(RunArgs),
    /// Run a coupling sweep (config with mode = "sweep").
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// List the built-in presets.
    ListPresets,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn execute(mut config: RunConfig, seed: Option<u64>, out: &PathBuf) -> Result<()> {
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let output = runner::run(&config)?;
    for path in runner::write_artifacts(&output, out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let config = match (&args.config, &args.preset) {
                (Some(path), _) => RunConfig::from_path(path)?,
                (None, Some(name)) => presets::load(name)?,
                (None, None) => unreachable!("clap requires one of --config/--preset"),
            };
            execute(config, args.seed, &args.out)
        }
        Command::Sweep { config, seed, out } => {
            let config = RunConfig::from_path(&config)?;
            if config.mode != Mode::Sweep {
                return Err(Error::Unsupported(format!(
                    "`sweep` needs mode = \"sweep\", found \"{}\"",
                    config.mode.name()
                )));
            }
            execute(config, seed, &out)
        }
        Command::ListPresets => {
            print!("{}", presets::listing());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
