// SPDX-License-Identifier: Apache-2.0

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// A flag is missing, malformed or inconsistent with another.
    Usage { flag: &'static str, message: String },
    /// Input data could not be read or parsed.
    Data(String),
}

impl CliError {
    pub fn usage(flag: &'static str, message: impl fmt::Display) -> Self {
        CliError::Usage { flag, message: message.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage { flag, message } => write!(f, "{flag}: {message}"),
            CliError::Data(message) => f.write_str(message),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}
