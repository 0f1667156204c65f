//! Error types shared by the numeric modules.

use alloc::string::String;
use core::fmt;

/// Input outside the mathematical domain of an operation.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainError(pub String);

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain error: {}", self.0)
    }
}

/// A quadrature or solver failed to reach the requested tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyError {
    pub what: String,
    /// Best value obtained.
    pub value_re: f64,
    pub value_im: f64,
    /// Estimated error of that value.
    pub estimate: f64,
    /// Tolerance that was requested.
    pub requested: f64,
}

impl fmt::Display for AccuracyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "accuracy error in {}: reached {:e}, requested {:e}",
            self.what, self.estimate, self.requested
        )
    }
}

/// A contour passes through (or too close to) a singularity.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourError {
    pub what: String,
    /// Offending point, if one was located.
    pub at_re: f64,
    pub at_im: f64,
}

impl fmt::Display for ContourError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "contour error in {}: singular near ({:e}, {:e})",
            self.what, self.at_re, self.at_im
        )
    }
}

/// Union of the error kinds produced by this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Domain(DomainError),
    Accuracy(AccuracyError),
    Contour(ContourError),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(e) => e.fmt(f),
            Error::Accuracy(e) => e.fmt(f),
            Error::Contour(e) => e.fmt(f),
        }
    }
}

impl From<DomainError> for Error {
    fn from(e: DomainError) -> Self {
        Error::Domain(e)
    }
}
impl From<AccuracyError> for Error {
    fn from(e: AccuracyError) -> Self {
        Error::Accuracy(e)
    }
}
impl From<ContourError> for Error {
    fn from(e: ContourError) -> Self {
        Error::Contour(e)
    }
}

/// Shorthand used by fallible operations in this crate.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl fmt::Display) -> Error {
    Error::Domain(DomainError(alloc::format!("{msg}")))
}
