//! Error and validation-report types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{context}: matrix is not square ({rows}x{cols})")]
    NotSquare {
        context: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("{context}: non-finite entry at ({row}, {col})")]
    NonFinite {
        context: &'static str,
        row: usize,
        col: usize,
    },

    #[error("{context}: dimension mismatch (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{context}: not Hermitian (residual {residual:.3e} exceeds {tolerance:.1e})")]
    NotHermitian {
        context: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("{context}: not unitary (residual {residual:.3e} exceeds {tolerance:.1e})")]
    NotUnitary {
        context: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("{context}: matrix is numerically singular (1-norm condition number {cond:.3e} exceeds {limit:.1e})")]
    IllConditioned {
        context: &'static str,
        cond: f64,
        limit: f64,
    },

    #[error("{context}: not a density matrix ({reason})")]
    NotDensity {
        context: &'static str,
        reason: String,
    },

    #[error("invalid bath parameters: {0}")]
    InvalidBath(ValidationReport),

    #[error("coefficients violate the quantum Ito unitarity identity (residual {residual:.3e} exceeds {tolerance:.1e})")]
    NotUnitaryCoefficients { residual: f64, tolerance: f64 },

    #[error("inconsistent normal-ordered coefficients: {identity} has residual {residual:.3e} (tolerance {tolerance:.1e})")]
    InconsistentCoefficients {
        identity: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("{context}: eigenvalue iteration failed to converge")]
    NoConvergence { context: &'static str },

    #[error("{0}")]
    Domain(String),
}

impl Error {
    /// Shorthand for a free-form domain error.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Outcome of a validation pass: one human-readable line per violated
/// constraint. An empty report means every constraint holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    violations: Vec<String>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, violation: impl Into<String>) {
        self.violations.push(violation.into());
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    /// Converts the report into a `Result`, erroring when any violation is
    /// present.
    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidBath(self))
        }
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            write!(f, "all constraints satisfied")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}
