use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid Satake parameters: {0}")]
    InvalidSatake(String),

    #[error("no local data for prime {0}")]
    MissingPrime(u64),

    #[error("index ({m}, {n}) outside table bounds ({bound_m}, {bound_n})")]
    OutOfBounds {
        m: u64,
        n: u64,
        bound_m: u64,
        bound_n: u64,
    },

    #[error("non-tempered GL(2) data (|lambda| > 2) at primes {0:?}")]
    NonTempered(Vec<u64>),

    #[error("integer overflow while computing tau({0}); the 128-bit range is exhausted")]
    Overflow(usize),

    #[error("Dirichlet polynomial index overflows 128 bits at {0}")]
    IndexOverflow(String),

    #[error("tan pole: nu_{index} = {value} is an odd multiple of 1/3")]
    Pole { index: usize, value: String },

    #[error("quadrature did not stabilise within tolerance {tol:e} up to K = {max_resolution}")]
    QuadratureNonConvergence { tol: f64, max_resolution: usize },

    #[error("rejection envelope exceeded: density {density} > bound {bound}")]
    EnvelopeExceeded { density: f64, bound: f64 },

    #[error("sequence value at index {index} is not real (imaginary part {imag:e})")]
    NotReal { index: u64, imag: f64 },

    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },

    #[error("{path}: line {line}: {reason}")]
    Parse {
        path: String,
        line: u64,
        reason: String,
    },

    #[error("{path}: line {line}: duplicate prime {p}")]
    DuplicatePrime { path: String, line: u64, p: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(std::io::Error::other(e))
    }
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field,
            reason: reason.into(),
        }
    }
}
