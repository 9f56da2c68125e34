use thiserror::Error;

/// Errors produced by the scattering and solver routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TunnelError {
    #[error("domain error: {0}")]
    Domain(String),

    /// `E` equals a strictly real barrier height, so `delta` divides by zero.
    #[error("singular kinematics at E = {energy} eV (E equals the real barrier height)")]
    SingularKinematics { energy: f64 },

    /// The transmission denominator vanished. `d_abs` is the magnitude that
    /// tripped the threshold.
    #[error("transmission diverges: |D| = {d_abs:e}")]
    Divergent { d_abs: f64 },

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("solver failed to converge in bracket [{lo}, {hi}]: {reason}")]
    SolverFailure { lo: f64, hi: f64, reason: String },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("transfer-matrix overflow: {0}")]
    Overflow(String),
}

impl TunnelError {
    pub fn is_divergent(&self) -> bool {
        matches!(self, TunnelError::Divergent { .. })
    }
}

pub type Result<T> = std::result::Result<T, TunnelError>;
