use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("pole of Gamma at z = {0}")]
    Pole(f64),

    #[error("{op} did not converge: {detail}")]
    NonConvergence { op: &'static str, detail: String },

    #[error("theta series cannot be truncated: q = {q} is too close to 1")]
    Truncation { q: f64 },

    #[error("quadrature under-resolves the kernel: {0}")]
    UnderResolved(String),

    #[error("determinant has negative sign (log|det| = {log_abs}); discretization is under-resolved")]
    NegativeDeterminant { log_abs: f64 },

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("division by a vanishing theta value in {0}")]
    ThetaZero(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed scan data: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// Short machine-readable tag, used by the CLI's JSON error field.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Pole(_) => "pole",
            Error::NonConvergence { .. } => "non_convergence",
            Error::Truncation { .. } => "truncation",
            Error::UnderResolved(_) => "under_resolved",
            Error::NegativeDeterminant { .. } => "negative_determinant",
            Error::Singular(_) => "singular",
            Error::ThetaZero(_) => "theta_zero",
            Error::Config(_) => "config",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
