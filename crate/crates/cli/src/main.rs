use std::process::ExitCode;

use clap::Parser;
use conceptua_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match conceptua_cli::execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
