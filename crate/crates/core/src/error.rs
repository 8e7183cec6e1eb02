use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series diverges: exponent {0} must exceed 1")]
    DivergentSeries(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("model parameters have not been set")]
    NotParameterized,

    #[error("operation not supported for {0}")]
    Unsupported(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("no observations at or above xmin = {0}")]
    EmptyTail(f64),

    #[error("no xmin candidate leaves at least two tail observations")]
    InsufficientTail,

    #[error("models use different thresholds (xmin {0} vs {1})")]
    XminMismatch(f64, f64),

    #[error("pointwise log-likelihood differences have zero variance")]
    DegenerateComparison,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: value {value} is not an integer but the sample is declared discrete")]
    KindMismatch { line: usize, value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable name, used for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivergentSeries(_) => "DivergentSeries",
            Error::Domain(_) => "DomainError",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::NotParameterized => "NotParameterized",
            Error::Unsupported(_) => "Unsupported",
            Error::DegenerateData(_) => "DegenerateData",
            Error::EmptyTail(_) => "EmptyTail",
            Error::InsufficientTail => "InsufficientTail",
            Error::XminMismatch(..) => "XminMismatch",
            Error::DegenerateComparison => "DegenerateComparison",
            Error::Parse { .. } => "ParseError",
            Error::KindMismatch { .. } => "KindMismatch",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
            Error::Csv(_) => "CsvError",
        }
    }
}
