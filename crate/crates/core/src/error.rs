use alloc::string::String;
use core::fmt;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A measure vector was empty, negative, or all zero.
    InvalidMeasure(String),
    /// A grid request that cannot be built (e.g. zero cells).
    InvalidGrid(String),
    /// An operation was asked for on the wrong kind of space.
    ModeMismatch(String),
    /// A parameter outside the preset's domain (e.g. non-integrable tail).
    Domain(String),
    /// Upper discretization of a kernel unbounded near 0 without a cap.
    UnboundedApproximation(String),
    /// Exact-tier generation or exact diameter above the configured cap.
    SizeCap { n: usize, cap: usize },
    /// Path/cycle enumeration work estimate above the guard.
    EnumerationCap { estimate: u64, cap: u64 },
    /// Power iteration did not meet the convergence criterion.
    IterationLimit { iterations: usize, last_rayleigh: f64 },
    /// Two algebraically equal routes disagreed beyond tolerance.
    Inconsistent(String),
    /// Too few usable points for a fit.
    InsufficientData(String),
    /// Leading eigenfunction has a non-positive entry on a positive-weight cell.
    InvalidEigenfunction(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidMeasure(s) => write!(f, "invalid measure: {s}"),
            Error::InvalidGrid(s) => write!(f, "invalid grid: {s}"),
            Error::ModeMismatch(s) => write!(f, "mode mismatch: {s}"),
            Error::Domain(s) => write!(f, "domain error: {s}"),
            Error::UnboundedApproximation(s) => {
                write!(f, "unbounded approximation: {s}")
            }
            Error::SizeCap { n, cap } => {
                write!(f, "size cap exceeded: n={n} > cap={cap}")
            }
            Error::EnumerationCap { estimate, cap } => {
                write!(f, "enumeration cap exceeded: estimate={estimate} > cap={cap}")
            }
            Error::IterationLimit {
                iterations,
                last_rayleigh,
            } => write!(
                f,
                "iteration limit reached after {iterations} steps (last Rayleigh quotient {last_rayleigh})"
            ),
            Error::Inconsistent(s) => write!(f, "consistency check failed: {s}"),
            Error::InsufficientData(s) => write!(f, "insufficient data: {s}"),
            Error::InvalidEigenfunction(s) => write!(f, "invalid eigenfunction: {s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
