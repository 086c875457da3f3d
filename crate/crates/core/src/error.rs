use thiserror::Error;

/// Errors surfaced by enumeration, spec validation and solution-file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// The dispersion law cannot define a valid problem (non-monotone,
    /// non-positive, or syntactically malformed).
    #[error("invalid dispersion law: {0}")]
    InvalidSpec(String),

    /// The requested domain would push some exact quantity past the
    /// integer widths the solver guarantees. Raised before any work.
    #[error("domain {domain} exceeds capacity: {reason}")]
    Capacity { domain: u32, reason: String },

    /// The brute-force reference enumerator refuses domains above its cap.
    #[error("domain {requested} exceeds the brute-force cap {cap}")]
    OracleCap { requested: u32, cap: u32 },

    /// A solution file could not be parsed as JSON.
    #[error("malformed solution file: {0}")]
    Parse(#[from] serde_json::Error),

    /// A solution file parsed but violates the format's invariants.
    #[error("invalid solution file: {0}")]
    InvalidSolutionFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
