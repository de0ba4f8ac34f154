use std::fmt;

use thiserror::Error;

/// Errors produced by the analysis pipelines.
///
/// The variants are grouped by how a caller is expected to react: bad input
/// (`Domain`, `InvalidSpec`, `Argument`, `Io`), a refusal because the theorem's
/// hypotheses are not met (`ZeroContinuum`, `Hypothesis`, `Divergent`), and
/// numerical trouble (`Consistency`, `Quadrature`, `NonConvergence`,
/// `ThresholdNotReached`).
#[derive(Error, Clone, PartialEq)]
pub enum Error {
    #[error("t = {t} lies outside the analysis window [{lo}, {hi}]")]
    Domain { t: f64, lo: f64, hi: f64 },

    #[error("invalid nonlinearity: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("f vanishes identically on [{start}, {end}]; zeros are not isolated")]
    ZeroContinuum { start: f64, end: f64 },

    #[error("hypothesis `{hypothesis}` violated (witness: {witness})")]
    Hypothesis { hypothesis: String, witness: String },

    #[error("time-of-level integral diverges at level {level}")]
    Divergent { level: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(
        "adaptive quadrature did not reach tolerance on [{a}, {b}] (error estimate {error:e})"
    )]
    Quadrature { a: f64, b: f64, error: f64 },

    #[error("descent did not converge after {iterations} iterations (last energy {energy})")]
    NonConvergence {
        iterations: usize,
        energy: f64,
        trace: Vec<f64>,
        last: Vec<f64>,
    },

    #[error("i/o: {0}")]
    Io(String),

    #[error("no radius in the scan reaches sup_norm >= rho - {eps} (largest sup_norm {best})")]
    ThresholdNotReached { eps: f64, best: f64 },
}

/// `Debug` shows the message; the descent trace and final iterate of
/// `NonConvergence` are summarized by their lengths.
impl fmt::Debug for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergence {
                iterations,
                energy,
                trace,
                last,
            } => f
                .debug_struct("NonConvergence")
                .field("iterations", iterations)
                .field("energy", energy)
                .field("trace_len", &trace.len())
                .field("last_len", &last.len())
                .finish(),
            other => write!(f, "Error({other})"),
        }
    }
}

impl Error {
    /// True for errors that mean "outside the hypotheses", as opposed to bad
    /// input or numerical failure.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::ZeroContinuum { .. } | Error::Hypothesis { .. } | Error::Divergent { .. }
        )
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::Quadrature { .. }
                | Error::Consistency(_)
                | Error::ThresholdNotReached { .. }
        )
    }

    pub(crate) fn hypothesis(hypothesis: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Hypothesis {
            hypothesis: hypothesis.into(),
            witness: witness.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
