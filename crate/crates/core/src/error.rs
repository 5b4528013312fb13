use thiserror::Error;

/// Errors raised by state construction, classification and dynamics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({0}, {1}, {2}) lies outside the Bell tetrahedron")]
    TetrahedronViolation(f64, f64, f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace {0} is not 1")]
    NotUnitTrace(f64),

    #[error("trace {0} is not positive")]
    NonPositiveTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("negative or non-finite time {0}")]
    InvalidTau(f64),

    #[error("cannot resolve eigenvalue clustering of the Lorentz form: {0}")]
    ClassificationAmbiguous(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("cone point has vanishing leading value {0:e}")]
    DegenerateApex(f64),

    #[error("closed form called on the wrong branch (x3 = {0})")]
    WrongBranch(f64),

    #[error("eigenvalue {re} + {im}i of the spin-flipped product is not real")]
    SpectrumNotReal { re: f64, im: f64 },

    #[error("eigenvalue {0:e} of the spin-flipped product is negative")]
    SpectrumNegative(f64),

    #[error("invalid non-diagonal representative: {0}")]
    InvalidRepresentative(String),

    #[error("integrator step {0} is outside (0, 1e-2]")]
    StepTooLarge(f64),

    #[error("state does not undergo sudden death")]
    NotEsd,

    #[error("raw concurrence at tau = 0 is {0}, no entanglement to lose")]
    NoInitialEntanglement(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
