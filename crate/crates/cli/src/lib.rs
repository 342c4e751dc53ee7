//! Batch front end for the `bosegas` library: parameter sweeps, the
//! invariant battery and CSV/JSON reports.

pub mod args;
pub mod config;
pub mod report;
pub mod run;
pub mod verify;

use std::fmt::Debug;

use thiserror::Error;

pub use config::RunConfig;
pub use report::Report;
pub use run::run;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("ParseError at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("UnknownKey `{key}` at {location}{}", suggestion.as_ref().map(|s| format!("; did you mean `{s}`?")).unwrap_or_default())]
    UnknownKey { key: String, location: String, suggestion: Option<String> },
    #[error("{name} in {operation} ({params}): {message}")]
    Numerical { name: String, operation: String, params: String, message: String },
    #[error("VerificationFailed: {failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
    #[error("IoError: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::UnknownKey { .. } => EXIT_CONFIG,
            CliError::Numerical { .. } | CliError::VerificationFailed { .. } => EXIT_NUMERICAL,
            CliError::Io(_) => 1,
        }
    }

    /// Wraps a library error with the operation and its parameters.
    pub fn numerical<E: Debug + std::fmt::Display>(operation: &str, params: String, error: E) -> Self {
        CliError::Numerical { name: variant_name(&error), operation: operation.into(), params, message: error.to_string() }
    }
}

/// Variant name of an error enum, read off its `Debug` form; wrapped
/// errors report the innermost variant.
pub fn variant_name<E: Debug>(error: &E) -> String {
    let text = format!("{error:?}");
    let mut name = text.as_str();
    loop {
        let end = name.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(name.len());
        let (head, rest) = name.split_at(end);
        match (head, rest.strip_prefix('(')) {
            ("Numerics" | "NoConvergence" | "Potential", Some(inner))
                if inner.starts_with(|c: char| c.is_ascii_uppercase()) =>
            {
                name = inner
            }
            _ => return head.to_string(),
        }
    }
}
