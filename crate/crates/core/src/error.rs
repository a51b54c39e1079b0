use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid table at row {row}: {reason}")]
    Table { row: usize, reason: String },

    #[error("extrapolation outside the permittivity table: {0}")]
    Extrapolation(String),

    #[error("numerical failure: {message} (achieved error estimate {estimate:e})")]
    Numerical { message: String, estimate: f64 },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid input: {0}")]
    Invalid(String),
}
