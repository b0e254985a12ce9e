use thiserror::Error;

/// Errors surfaced by fallible operations. Contract violations that indicate
/// bugs in calling code (length mismatches, out-of-range indices) panic
/// instead.
#[derive(Debug, Error)]
pub enum Error {
    /// Input values outside an operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A circuit that violates structural requirements.
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    /// Column ordering produced a zero column between two nonzero columns,
    /// which would merge distinct fault regions.
    #[error("column ordering violation: {0}")]
    OrderingViolation(String),

    /// Work required exceeds the caller's budget.
    #[error("resource limit: {what} requires {required} units, budget is {budget}")]
    ResourceLimit {
        what: String,
        required: u128,
        budget: u64,
    },

    /// A majority subpattern with no classical decoding. Cannot occur for
    /// fault sets within the design weight.
    #[error("undecodable subpattern: {0}")]
    UndecodableSubpattern(String),

    /// Malformed text in one of the file formats.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
