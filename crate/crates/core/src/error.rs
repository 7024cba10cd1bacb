use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Mean-field and linearized analytics are only defined below the critical drive.
    #[error("drive |Ω|/Ω_c = {ratio:.6} is at or above the critical drive")]
    AboveThreshold { ratio: f64 },

    /// Holstein-Primakoff moments diverge as cos θ → 0.
    #[error("drive |Ω|/Ω_c = {ratio:.6} is inside the critical region (limit {limit})")]
    CriticalRegion { ratio: f64, limit: f64 },

    #[error("steady state is not unique (relative singular value {sigma:.3e})")]
    NonUnique { sigma: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("mean spin vector vanishes (|<J>| = {norm:.3e}); direction undefined")]
    VanishingMeanSpin { norm: f64 },

    #[error("vanishing denominator in {0}")]
    VanishingDenominator(&'static str),

    #[error("Fock cutoff {cutoff} not converged (drift {drift:.3e})")]
    CutoffNotConverged { cutoff: usize, drift: f64 },
}
