//! Crate-wide error type.

use std::fmt;

/// Convenience alias used by every fallible routine in the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the toolkit.
///
/// Numerical routines prefer returning a structured error over panicking;
/// panics are reserved for violated internal invariants (bugs).
#[derive(Debug)]
pub enum Error {
    /// Matrix or vector dimensions do not line up for the requested operation.
    Dimension(String),
    /// An input entry was NaN or infinite.
    NonFinite(&'static str),
    /// A matrix required to be invertible was singular within tolerance.
    Singular(&'static str),
    /// An iteration failed to converge within its budget.
    NoConvergence(&'static str),
    /// A size cap (matrix dimension, polynomial degree, ...) was exceeded.
    CapExceeded { what: &'static str, got: usize, cap: usize },
    /// Expansion centers must be pairwise distinct.
    CentersNotDistinct { i: usize, j: usize },
    /// The sampling radius collides with a critical value of the center polynomial.
    CriticalRadius { radius: f64, critical: f64 },
    /// The spectral radius of `p(A)` reaches outside the series' disc of convergence.
    RadiusExceeded { spectral: f64, radius: f64 },
    /// An integration contour passes through (or hugs) the spectrum; `at` is
    /// the offending eigenvalue.
    ContourOnSpectrum { clearance: f64, needed: f64, at: num_complex::Complex64 },
    /// Spectra are too close for the requested separation-based solve.
    SpectralGap { gap: f64, needed: f64 },
    /// The operation requires an invertible matrix.
    NotInvertible(&'static str),
    /// An input violates a mathematical precondition of the operation.
    Domain(String),
    /// Malformed text in the matrix interchange format.
    Parse { line: usize, msg: String },
    /// Underlying I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::NonFinite(what) => write!(f, "non-finite entry in {what}"),
            Error::Singular(what) => write!(f, "singular matrix in {what}"),
            Error::NoConvergence(what) => write!(f, "iteration did not converge: {what}"),
            Error::CapExceeded { what, got, cap } => {
                write!(f, "{what} = {got} exceeds supported cap {cap}")
            }
            Error::CentersNotDistinct { i, j } => {
                write!(f, "expansion centers {i} and {j} coincide within tolerance")
            }
            Error::CriticalRadius { radius, critical } => write!(
                f,
                "sampling radius {radius} collides with critical value {critical}"
            ),
            Error::RadiusExceeded { spectral, radius } => write!(
                f,
                "spectral radius {spectral} of p(A) reaches outside series radius {radius}"
            ),
            Error::ContourOnSpectrum { clearance, needed, at } => write!(
                f,
                "contour clearance {clearance:.3e} below required {needed:.3e} \
                 (eigenvalue {at})"
            ),
            Error::SpectralGap { gap, needed } => {
                write!(f, "spectral gap {gap:.3e} below required {needed:.3e}")
            }
            Error::NotInvertible(what) => write!(f, "{what} requires an invertible matrix"),
            Error::Domain(msg) => write!(f, "domain violation: {msg}"),
            Error::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
