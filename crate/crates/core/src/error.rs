use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChmError {
    /// Input that is not a 6x6 grid.
    #[error("expected a 6x6 matrix, got {rows} rows with lengths {cols:?}")]
    Dimension { rows: usize, cols: Vec<usize> },

    #[error("entry {context} is not unimodular (modulus {modulus})")]
    NotUnimodular { context: String, modulus: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A step that must succeed for valid input did not; usually a
    /// tolerance misconfiguration.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("matrix is not a complex Hadamard matrix (gram defect {defect:e})")]
    NotChm { defect: f64 },

    /// An assembled Karlsson block has an entry off the unit circle.
    #[error("karlsson block {block} has non-unimodular entries: {entries:?}")]
    KarlssonEntry { block: String, entries: Vec<(f64, f64)> },

    #[error("counterexample: {0}")]
    Counterexample(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = ChmError> = std::result::Result<T, E>;
