use thiserror::Error;

/// Errors raised by the algebra kernel and the command-line driver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis {axis} out of range for n = {n}")]
    AxisOutOfRange { axis: usize, n: usize },

    #[error("the zero multi-index has no predecessor")]
    NoPredecessor,

    #[error("{0}: input must be nonzero")]
    ZeroInput(&'static str),

    #[error("element is not in the jet algebra L_n (offending term {0})")]
    NotInJetAlgebra(String),

    #[error("Whittaker type ({0}) is singular; this operation needs every a_i != 0")]
    SingularType(String),

    #[error("exterior power k = {k} out of range for n = {n}")]
    ExteriorOutOfRange { n: usize, k: usize },

    #[error("complex stage k = {k} out of range 1..={n}")]
    StageOutOfRange { n: usize, k: usize },

    #[error("truncation degree {have} is too small, degree {need} is required")]
    TruncationTooSmall { need: u32, have: u32 },

    #[error("normalizing constant k_m vanished or depends on v at m = {0}")]
    VanishingNormalizer(String),

    #[error("element is not homogeneous for the Cartan subalgebra: {0}")]
    NotHomogeneous(String),

    #[error("invalid gl_n-module: {0}")]
    InvalidModule(String),

    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
