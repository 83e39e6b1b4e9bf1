//! Error type shared across the library and the command-line front end.
//!
//! Each variant carries a stable machine-readable code (the first token of
//! its `Display` form) so callers and scripts can match on failures without
//! parsing prose.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Operands have incompatible dimensions.
    #[error("dim_mismatch: {0}")]
    DimMismatch(String),

    /// Input matrix is not hermitian within the admission tolerance.
    #[error("not_hermitian: {0}")]
    NotHermitian(String),

    /// `1 - A` is numerically singular, so the resolvent is unavailable.
    #[error("resolvent_singular: |det(1 - A)| = {det_abs:.3e} below guard {guard:.3e}")]
    ResolventSingular { det_abs: f64, guard: f64 },

    /// An index exceeded its valid range (degree, coefficient order, ...).
    #[error("index_range: {0}")]
    IndexRange(String),

    /// Exact sphere moments of odd total degree vanish; asking for one is
    /// almost always a caller bug, so it is reported instead of returned.
    #[error("odd_degree_moment_zero: total degree {0} is odd")]
    OddDegreeMomentZero(usize),

    /// The truncation planner needs more terms than the hard cap allows.
    #[error("truncation_cap: needs more than {cap} terms for target {target:.3e}")]
    TruncationCap { cap: usize, target: f64 },

    /// The resolvent power series diverges because the spectral bound is >= 1.
    #[error("resolvent_series_divergent: norm bound {0} >= 1")]
    ResolventSeriesDivergent(f64),

    /// A matrix file failed to parse or violated the documented format.
    #[error("bad_matrix_file: {0}")]
    BadMatrixFile(String),

    /// Underlying I/O failure.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimMismatch(_) => "dim_mismatch",
            Error::NotHermitian(_) => "not_hermitian",
            Error::ResolventSingular { .. } => "resolvent_singular",
            Error::IndexRange(_) => "index_range",
            Error::OddDegreeMomentZero(_) => "odd_degree_moment_zero",
            Error::TruncationCap { .. } => "truncation_cap",
            Error::ResolventSeriesDivergent(_) => "resolvent_series_divergent",
            Error::BadMatrixFile(_) => "bad_matrix_file",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BadMatrixFile(_) | Error::Io(_) => 2,
            Error::NotHermitian(_) => 3,
            Error::TruncationCap { .. } => 4,
            _ => 1,
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
