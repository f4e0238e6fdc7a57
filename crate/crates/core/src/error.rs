use thiserror::Error;

/// Errors reported by the library.
///
/// Everything except [`Error::Internal`] is a validation failure of caller
/// input; `Internal` signals a broken invariant inside the library itself
/// (e.g. a partition that fails to cover a point).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not row-finite: row {row} has no finite entry")]
    NotRowFinite { row: usize },

    #[error("coefficient is not finite for this matrix: A({row},{col}) = \u{3b5}")]
    InvalidCoefficient { row: usize, col: usize },

    #[error("matrix dimension {dim} exceeds the brute-force permanent cap {cap}")]
    PermanentCap { dim: usize, cap: usize },

    #[error("{op} requires a canonical DBM; call canonical_form first")]
    NotCanonical { op: &'static str },

    #[error("{op} requires a partitioned PWA system (built by generate_partition)")]
    NotPartitioned { op: &'static str },

    #[error("coefficient {0} does not name a non-empty region of this system")]
    UnknownCoefficient(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures of library invariants rather than caller input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
