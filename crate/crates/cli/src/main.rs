use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qcav::config::{parse_config_text, parse_override, Setting};
use qcav::{run, CliError, Mode, RunConfig};

/// Charge qubit in a microwave cavity: device numbers, storage and
/// decoherence curves, parameter sweeps.
#[derive(Parser, Debug)]
#[command(name = "qcav", version)]
struct Cli {
    #[arg(value_enum)]
    mode: Mode,

    /// Config file of `key = value` lines; `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override one setting; repeatable and applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Write output here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn settings(cli: &Cli) -> Result<Vec<Setting>, CliError> {
    let mut out = Vec::new();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        out.extend(parse_config_text(&text, &path.display().to_string())?);
    }
    for arg in &cli.set {
        out.push(parse_override(arg)?);
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(cli.mode, &settings(cli)?)?;
    let report = run(&cfg)?;
    for w in &report.warnings {
        eprintln!("{w}");
    }
    match &cli.out {
        Some(path) => std::fs::write(path, report.text)?,
        None => print!("{}", report.text),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qcav: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
