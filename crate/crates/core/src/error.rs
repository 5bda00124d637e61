use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial: {0}")]
    ZeroPolynomial(&'static str),
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("not a tabulated singular value: {0}")]
    NotTabulated(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} did not converge: best estimate {estimate:e}, achieved bound {bound:e}")]
    NotConverged {
        what: String,
        estimate: f64,
        bound: f64,
    },
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("bad prime {p}; excluded primes are {excluded:?}")]
    BadPrime { p: u64, excluded: Vec<u64> },
    #[error("singular curve: {0}")]
    Singular(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("theorem hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("fixture {name}: {reason}")]
    Fixture { name: String, reason: String },
    #[error("insufficient coefficients: need {need}, have {have}")]
    InsufficientCoefficients { need: usize, have: usize },
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
