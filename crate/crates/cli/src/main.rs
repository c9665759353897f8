use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use obscat::exec::Exec;
use obscat_cli::{presets, run, CliError, Mode, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "obscat", version, about = "Oblique-incidence scattering by a penetrable doubly-connected cylinder")]
struct Args {
    mode: Mode,
    /// TOML run configuration.
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration.
    #[arg(long, value_parser = presets::NAMES)]
    preset: Option<String>,
    /// Comma-separated half node counts, overriding `numeric.n`.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let text = match (&args.config, &args.preset) {
        (Some(path), _) => std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        (None, Some(name)) => presets::source(name)
            .ok_or_else(|| CliError::Config(format!("unknown preset {name}")))?
            .to_string(),
        (None, None) => unreachable!("clap requires --config or --preset"),
    };
    let mut config = RunConfig::from_toml(&text)?;
    if let Some(n) = &args.n {
        let mut patched = config.clone();
        patched.numeric.n = n.clone();
        // Re-validate through the parser so the override obeys the same rules.
        config = RunConfig::from_toml(&patched.to_toml())?;
    }
    if let Some(out) = &args.out {
        config.output.dir = out.clone();
    }
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match load(&args).and_then(|c| run(args.mode, &c, Exec::default())) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("obscat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
