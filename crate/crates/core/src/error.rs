use thiserror::Error;

/// Crate-wide error type. Every variant carries enough context to be
/// rendered as a machine-readable `(code, module, message)` triple.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("[{module}] resource budget exceeded: {message}")]
    Budget { module: &'static str, message: String },

    #[error("[{module}] precision target unreachable: {message}")]
    Precision { module: &'static str, message: String },

    #[error("degree mismatch: chain has degree {chain}, expected {expected}")]
    DegreeMismatch { chain: usize, expected: usize },

    #[error("complex is disconnected: site {site} unreachable from site 0")]
    Disconnected { site: usize },

    #[error("no integer 2-chain bounds the contour (nontrivial homology class)")]
    HomologyObstruction,

    #[error("quadrature aliasing above tolerance: doubling the grid moved the result by {delta:e}")]
    Aliasing { delta: f64 },

    #[error("truncation tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailBound { bound: f64, tol: f64 },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("format: {0}")]
    Format(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable code for structured output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Budget { .. } => "budget_exceeded",
            Error::Precision { .. } => "precision_unreachable",
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::Disconnected { .. } => "disconnected_complex",
            Error::HomologyObstruction => "homology_obstruction",
            Error::Aliasing { .. } => "quadrature_aliasing",
            Error::TailBound { .. } => "tail_bound_violation",
            Error::Io(_) => "io_error",
            Error::Format(_) => "format_error",
        }
    }

    /// Module the error originated from, when known.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Budget { module, .. } | Error::Precision { module, .. } => module,
            Error::DegreeMismatch { .. } | Error::Disconnected { .. } => "cellcomplex",
            Error::HomologyObstruction => "abeliandual",
            _ => "core",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
