use thiserror::Error;

use crate::connecting::Orientation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `|a_k|` is zero relative to the largest coupling.
    #[error("coupling a_{0} vanishes at the configured threshold")]
    ZeroCoupling(usize),

    #[error("length mismatch: {what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("horizon must be at least {min}, got {found}")]
    InvalidHorizon { min: usize, found: usize },

    #[error("response window {available} is shorter than the requested {needed}")]
    WindowTooShort { needed: usize, available: usize },

    #[error("connecting matrix of size {0} is singular at the configured threshold")]
    SingularConnecting(usize),

    /// `f^n_0` vanished, so the Krein recursion cannot divide by it.
    #[error("Krein trajectory degenerates at step {0}; retry with different (alpha, beta)")]
    DegenerateTrajectory(usize),

    #[error("leading minor of size {0} is singular at the configured threshold")]
    SingularMinor(usize),

    #[error("leading response entry r_0 vanishes")]
    ZeroLeadingEntry,

    #[error("response vectors have odd length, got {0}")]
    EvenLength(usize),

    #[error("expected a connecting matrix in {expected:?} orientation, got {found:?}")]
    WrongOrientation {
        expected: Orientation,
        found: Orientation,
    },

    #[error("Krein parameters (alpha, beta) must not both vanish")]
    ZeroParameters,

    #[error("invalid tolerance {name} = {value}")]
    InvalidTolerance { name: &'static str, value: f64 },
}
