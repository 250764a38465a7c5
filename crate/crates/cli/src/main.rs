use std::process::ExitCode;

use clap::Parser;
use lacuna_cli::cli::{dispatch, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match dispatch(cli.command, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(lacuna_cli::exit_code(&err) as u8)
        }
    }
}
