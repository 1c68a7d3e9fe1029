use thiserror::Error;

use crate::weighmodel::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weighing plan: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("invalid problem instance: {0}")]
    Instance(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// An operation was requested on a transcript in the wrong state, e.g.
    /// classifying privacy of a transcript that does not prove anything.
    #[error("invalid state: {0}")]
    State(String),

    #[error("cannot construct strategy: {0}")]
    Construction(String),

    #[error("search bounds exceeded: {0}")]
    Bounds(String),

    #[error("malformed input: {0}")]
    Parse(#[from] serde_json::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}
