use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("no stationary point")]
    NoStationaryPoint,
    #[error("degenerate form: all coefficients vanish")]
    DegenerateForm,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("empty study")]
    EmptyStudy,
    #[error("record {0} has no cpu time")]
    MissingCpuTime(usize),
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
