use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use quadstat::{run, CliError, RunConfig};

fn emit(config: &RunConfig) -> Result<(), CliError> {
    let bytes = run(config)?.render(config.format)?;
    match &config.out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout().write_all(&bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match emit(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
