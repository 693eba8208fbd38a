use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("atom at the origin is not allowed here")]
    AtomAtOrigin,

    #[error("atom at {re}+{im}i is off the imaginary axis")]
    OffAxisAtom { re: f64, im: f64 },

    #[error("charge has negative mass at {re}+{im}i; a positive measure is required")]
    SignedCharge { re: f64, im: f64 },

    #[error("the Blaschke condition fails for this charge (sum {sum})")]
    BlaschkeFailed { sum: f64 },

    #[error("empty grid")]
    EmptyGrid,

    #[error("quadrature failed: {0}")]
    Nonintegrable(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
