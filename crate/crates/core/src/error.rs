use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A function was evaluated outside the region where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature tolerance not met on [{a}, {b}]: estimated error {estimate:e} after {subdivisions} subdivisions")]
    ToleranceNotMet {
        a: f64,
        b: f64,
        estimate: f64,
        subdivisions: usize,
    },

    /// The ODE integrator exhausted its step budget.
    #[error("step limit of {max_steps} exceeded at t = {t}")]
    StepLimitExceeded { max_steps: usize, t: f64 },

    /// The integrator step size underflowed.
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A sample landed exactly on a turning point, so the branch sign is undefined.
    #[error("branch ambiguity at t = {0}: turning point on a sample")]
    BranchAmbiguity(f64),

    /// Text syntax error in a function expression.
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
