use thiserror::Error;

use crate::model::PhaseLabel;

/// Errors raised across the workbench.
///
/// Variants fall in two groups: input/contract violations, and numerical
/// failures (see [`Error::is_numerical`]) which the CLI maps to a distinct
/// exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("negative discriminant in {quantity}: {value:.6e}")]
    NegativeDiscriminant { quantity: &'static str, value: f64 },

    #[error("Bogoliubov unstable: |2 g'| = {two_g_prime:.6e} >= omega = {omega:.6e}")]
    BogoliubovUnstable { two_g_prime: f64, omega: f64 },

    #[error("coupling g = {g} is not above the transition g_t = {g_t}")]
    BelowThreshold { g: f64, g_t: f64 },

    #[error("energy landscape unstable over the whole scanned domain")]
    LandscapeUnstable,

    #[error("quadratic form unstable: |2 lambda| = {two_lambda:.6e} >= omega = {omega:.6e}")]
    Unstable { two_lambda: f64, omega: f64 },

    #[error("operation requires {expected:?} but parameters are in {actual:?}")]
    WrongPhase { expected: PhaseLabel, actual: PhaseLabel },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("could not eliminate the linear fluctuation term (residual {residual:.3e})")]
    LinearTermUnresolved { residual: f64 },

    #[error("Fock cutoff {n_max} too small (need at least {min})")]
    CutoffTooSmall { n_max: usize, min: usize },

    #[error("matrix is not Hermitian: max deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("inconsistent detunings: delta_r - delta_b = {difference:.6e}, expected {expected:.6e}")]
    InconsistentDetunings { difference: f64, expected: f64 },

    #[error("blue-sideband balance degenerate at epsilon_S = {epsilon_s}")]
    DegenerateBalance { epsilon_s: f64 },

    #[error("infeasible drive: {constraint} = {value:.6e} exceeds limit {limit:.6e}")]
    Infeasible { constraint: &'static str, value: f64, limit: f64 },

    #[error("time step {dt:.3e} too large, need <= {max_dt:.3e}")]
    StepTooLarge { dt: f64, max_dt: f64 },

    #[error("norm drift {drift:.3e} exceeds tolerance {tolerance:.3e}")]
    NormDrift { drift: f64, tolerance: f64 },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of a numerical procedure rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BogoliubovUnstable { .. }
                | Error::LandscapeUnstable
                | Error::Unstable { .. }
                | Error::LinearTermUnresolved { .. }
                | Error::NoConvergence { .. }
                | Error::NormDrift { .. }
                | Error::NegativeDiscriminant { .. }
                | Error::DomainError(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
