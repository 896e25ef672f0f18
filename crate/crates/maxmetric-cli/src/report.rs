//! Run report envelope and output plumbing. Reports are deterministic for
//! identical inputs and flags; wall time is attached only to interactive
//! single runs, never to batch outputs.

use std::path::Path;

use serde::Serialize;

use maxmetric::error::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    pub result: T,
}

impl<T: Serialize> RunReport<T> {
    pub fn new(subcommand: &str, input: &str, result: T) -> Self {
        RunReport {
            tool: "maxmetric",
            version: TOOL_VERSION,
            subcommand: subcommand.to_string(),
            input: input.to_string(),
            algebra_hash: None,
            wall_ms: None,
            result,
        }
    }

    pub fn with_hash(mut self, hash: String) -> Self {
        self.algebra_hash = Some(hash);
        self
    }

    pub fn with_wall_ms(mut self, ms: u64) -> Self {
        self.wall_ms = Some(ms);
        self
    }
}

/// Serializes a report and writes it to stdout or the requested file.
pub fn emit<T: Serialize>(report: &T, out: Option<&Path>) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Parse(format!("serialization: {e}")))?;
    text.push('\n');
    match out {
        None => {
            print!("{}", text);
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {}", path.display(), e))),
    }
}

pub fn write_text(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        None => {
            print!("{}", text);
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {}", path.display(), e))),
    }
}

/// Stable exit-code contract: 0 success/MAXIMAL, 1 validation failure,
/// 2 I/O-parse failure, 3 INCONCLUSIVE, 4 internal limit exceeded.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => 2,
        Error::LimitExceeded(_) => 4,
        _ => 1,
    }
}
