//! Command implementations behind the `hopfore` binary. Every command returns
//! its full output and exit code so it can be driven from tests.

pub mod commands;
pub mod config;
pub mod parse;

use thiserror::Error;

/// Exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A suite ran and reported failures, or an engine error occurred.
    pub const FAILURE: i32 = 1;
    /// The rules and the oracle disagree.
    pub const MISMATCH: i32 = 2;
    /// The oracle could not account for every invertible Jordan block.
    pub const INCOMPLETE_POOL: i32 = 3;
    /// Invalid configuration or input expression.
    pub const CONFIG: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Engine(#[from] hopfore::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Syntax { .. } => exit::CONFIG,
            CliError::Engine(e) => match e {
                hopfore::Error::IncompleteEigenPool { .. } => exit::INCOMPLETE_POOL,
                hopfore::Error::InvalidParams(_)
                | hopfore::Error::InvalidArgument(_)
                | hopfore::Error::UnsupportedCase(_) => exit::CONFIG,
                _ => exit::FAILURE,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Engine {
    Rules,
    Oracle,
    Both,
}

/// Output text and exit code of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub out: String,
}

impl Outcome {
    pub fn ok(out: String) -> Outcome {
        Outcome { code: exit::OK, out }
    }

    pub fn from_error(e: &CliError, format: Format) -> Outcome {
        let out = match format {
            Format::Text => format!("error: {e}\n"),
            Format::Json => format!("{}\n", serde_json::json!({"error": e.to_string(), "exit_code": e.exit_code()})),
        };
        Outcome { code: e.exit_code(), out }
    }
}
