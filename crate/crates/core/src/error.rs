use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("cannot parse model preset `{input}`: {reason}")]
    Preset { input: String, reason: String },

    #[error("state Z_n = {state} exceeds slope s_n = {slope} at n = {n}")]
    StateAboveSlope { n: u64, state: u64, slope: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("slope s_{n} is not rational; exact arithmetic unavailable")]
    IrrationalSlope { n: u64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error_estimate:e} after {evaluations} evaluations")]
    Quadrature {
        estimate: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("finite-difference stencil lost precision at lambda = {lambda} (step {step:e})")]
    StepSize { lambda: f64, step: f64 },

    #[error("root bracket not found: {0}")]
    Bracket(String),

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
