use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("triple is not admissible: {0}")]
    InadmissibleTriple(String),

    #[error("matrix is not in G2 (orthogonality {orthogonality:.3e}, automorphism {automorphism:.3e}, columns {columns:.3e})")]
    NotG2 {
        orthogonality: f64,
        automorphism: f64,
        columns: f64,
    },

    #[error("matrix is not special unitary (residual {0:.3e})")]
    NotSpecialUnitary(f64),

    #[error("matrix does not match the {pattern} pattern (residual {residual:.3e})")]
    Pattern { pattern: &'static str, residual: f64 },

    #[error("vector is not horizontal (|<X, h>| = {0:.3e})")]
    NotHorizontal(f64),

    #[error("plane vectors are linearly dependent (gram determinant {0:.3e})")]
    DegeneratePlane(f64),

    #[error("angle out of the admissible range: {0}")]
    AngleOutOfRange(String),

    #[error("element is not in Z1 ∩ Z2 (|g11|, |g12|, |g13| = {0:.3e}, {1:.3e}, {2:.3e})")]
    NotInZ1Z2(f64, f64, f64),

    #[error("reduction failed to reach the canonical family (residual {0:.3e})")]
    ReductionFailed(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed matrix JSON: {0}")]
    MatrixFormat(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
