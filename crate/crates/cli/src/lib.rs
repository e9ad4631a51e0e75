//! File formats, reports and the `conceptua` command line on top of
//! the `conceptua` library.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod json;
pub mod plot;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub use args::{Cli, Command};
pub use error::CliError;
pub use plot::PlotTable;
pub use report::Report;

/// Serialized report and plot table of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Vec<u8>,
    pub plot: PlotTable,
}

fn render<T: Serialize>(result: Result<(Report<T>, PlotTable), CliError>) -> Result<RunOutput, CliError> {
    let (report, plot) = result?;
    let report = json::to_report_bytes(&report).map_err(|e| CliError::Numeric(format!("cannot serialize report: {e}")))?;
    Ok(RunOutput { report, plot })
}

pub fn run(command: &Command) -> Result<RunOutput, CliError> {
    match command {
        Command::Ebr(a) => render(commands::run_ebr(a)),
        Command::Interference(a) => render(commands::run_interference(a)),
        Command::Bell(a) => render(commands::run_bell(a)),
        Command::Cognitons(a) => render(commands::run_cognitons(a)),
        Command::Dilation(a) => render(commands::run_dilation(a)),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

/// Runs the command and writes the report (stdout unless `--output`) and
/// the plot table when `--emit-plot` is given.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let out = run(&cli.command)?;
    let common = cli.command.common();
    match &common.output {
        Some(path) => write_file(path, &out.report)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(&out.report)
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Write { path: "<stdout>".into(), source })?;
        }
    }
    if let Some(path) = &common.emit_plot {
        write_file(path, &out.plot.to_bytes())?;
    }
    Ok(())
}
