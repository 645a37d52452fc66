// SPDX-License-Identifier: Apache-2.0

mod args;
mod commands;
mod error;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::RankQuery;
use error::CliError;

fn run(cli: Cli) -> Result<commands::Report, CliError> {
    match cli.command {
        Command::Build { n, out } => commands::build(n, out.format),
        Command::Validate { n, layout, out } => commands::validate_cmd(n, layout.as_deref(), out.format),
        Command::Sort { data, layout, trace, out } => {
            commands::sort_cmd(&data, layout.as_deref(), trace.as_deref(), out.format)
        }
        Command::Min { data, out } => commands::extreme(&data, false, out.format),
        Command::Max { data, out } => commands::extreme(&data, true, out.format),
        Command::Rank { data, r, at_least, chunk, row, out } => {
            commands::rank_cmd(&data, &RankQuery { r, at_least, chunk, row }, out.format)
        }
        Command::Search { data, key, out } => commands::search_cmd(&data, &key, out.format),
        Command::Depth { n, circuit, fanin, emit_netlist, out } => {
            commands::depth_cmd(n, circuit, fanin, emit_netlist.as_deref(), out.format)
        }
        Command::Perm { n, j, out } => commands::perm_cmd(n, j, out.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(report.body.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(report.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
