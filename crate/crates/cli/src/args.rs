// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xbar::FaninLimit;

#[derive(Debug, Parser)]
#[command(name = "xbar", version, about = "Crosspoint array construction, enumeration sort and query circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct FormatArg {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Where the key array comes from.
#[derive(Debug, Args)]
pub struct DataArgs {
    /// Number of classes. Inferred from --input when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated integers, or a file with one integer per line.
    #[arg(long)]
    pub input: Option<String>,
    /// Seed for a random input array when --input is absent.
    #[arg(long, env = "XBAR_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the minimal layout for n classes.
    Build {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: FormatArg,
    },
    /// Check a built or supplied layout. Exits 1 on violations.
    Validate {
        #[arg(long)]
        n: Option<usize>,
        /// Layout file: JSON document, or slot ids separated by `-`, `,` or whitespace.
        #[arg(long)]
        layout: Option<PathBuf>,
        #[command(flatten)]
        out: FormatArg,
    },
    /// Run the enumeration sort and print T, ranks and diagnostics.
    Sort {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Write the per-phase trace here (CSV if the name ends in .csv, JSON lines otherwise).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        out: FormatArg,
    },
    /// Index of the smallest key via the NOR-row circuit.
    Min {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: FormatArg,
    },
    /// Index of the largest key via the AND-row circuit.
    Max {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: FormatArg,
    },
    /// Rank queries: all ranks, exact selection (--r) or the chunked test (--at-least).
    Rank {
        #[command(flatten)]
        data: DataArgs,
        /// Select the element with exactly this many smaller elements.
        #[arg(long, conflicts_with = "at_least")]
        r: Option<usize>,
        /// Ask whether --row has rank at least this value.
        #[arg(long, requires = "row")]
        at_least: Option<usize>,
        /// Chunk width for --at-least.
        #[arg(long, default_value_t = 2)]
        chunk: usize,
        /// Row of T tested by --at-least.
        #[arg(long)]
        row: Option<usize>,
        #[command(flatten)]
        out: FormatArg,
    },
    /// Smallest index holding --key.
    Search {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, allow_hyphen_values = true)]
        key: String,
        #[command(flatten)]
        out: FormatArg,
    },
    /// Gate depth of a query circuit under a fan-in model.
    Depth {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = CircuitKind::Min)]
        circuit: CircuitKind,
        /// `unbounded` or an integer b >= 2.
        #[arg(long, default_value = "unbounded")]
        fanin: FaninLimit,
        /// Write the netlist in structural text form to this path (`-` for stdout).
        #[arg(long)]
        emit_netlist: Option<PathBuf>,
        #[command(flatten)]
        out: FormatArg,
    },
    /// Cycles of p^j, or the Q partition when --j is omitted.
    Perm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: Option<usize>,
        #[command(flatten)]
        out: FormatArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitKind {
    Encoder,
    Priority,
    Min,
    Max,
    Threshold,
    Adder,
    Select,
}
