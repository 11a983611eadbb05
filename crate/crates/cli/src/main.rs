//! `tricomi`: command-line front end of the verification toolkit.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails
//! and 2 on configuration errors.

mod commands;
mod config;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::Settings;
use tricomi::Error;

#[derive(Debug, Parser)]
#[command(name = "tricomi", version, about = "Numerical checks for Gellerstedt-type operators on Tricomi domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the critical exponent and the supercritical threshold.
    Exponent,
    /// Describe a domain; optionally export its boundary as CSV or SVG.
    Domain,
    /// Tabulate the dilation flow from a start point.
    Flow,
    /// Check one identity on a fixture or user field.
    Verify {
        #[arg(value_enum)]
        identity: Identity,
    },
    /// Measure the dilation scaling laws.
    Scaling,
    /// Hardy-Sobolev constants, G_L table and random sweeps.
    Hardy,
    /// Run the full fixture matrix for one parameter pair.
    Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Identity {
    Step1,
    Step2,
    Step3,
    Pohozaev,
    SigmaSign,
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn io(what: &str, e: std::io::Error) -> Self {
        Self { code: 1, message: format!("{what}: {e}") }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } | Error::OrientationSelfTest { .. } | Error::Domain(_) => 1,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.settings.resolve().and_then(|s| match cli.command {
        Command::Exponent => commands::exponent(&s),
        Command::Domain => commands::domain(&s),
        Command::Flow => commands::flow(&s),
        Command::Verify { identity } => commands::verify(&s, identity),
        Command::Scaling => commands::scaling(&s),
        Command::Hardy => commands::hardy(&s),
        Command::Suite => commands::suite(&s),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
