use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not unitary: residual {residual:.3e} exceeds {tol:.1e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("state is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("unsupported local dimension {d}: {reason}")]
    UnsupportedDimension { d: usize, reason: &'static str },

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("{what} residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    Residual {
        what: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("invalid controlled form: {0}")]
    InvalidControlledForm(String),

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
