use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A potential or metric quantity evaluated to a non-finite value.
    #[error("non-finite evaluation: {0}")]
    Evaluation(String),

    /// `null_completion` was asked to solve h0 = 0 with dt = 0; vertical
    /// light rays carry no Newtonian time and are excluded.
    #[error("null completion requires dt != 0")]
    NoTimeFlow,

    /// A sampled path is too short or degenerate for the requested check.
    #[error("degenerate path: {0}")]
    Path(String),

    /// Two trajectories do not share the same time grid.
    #[error("grid mismatch: {0}")]
    Grid(String),

    /// Integration left the finite range. `last_valid` indexes the last
    /// good sample; the partial trajectory is kept for diagnostics.
    #[error("state became non-finite after sample {last_valid}")]
    NonFiniteState {
        last_valid: usize,
        partial: Box<crate::dynamics::Trajectory>,
    },

    /// A matrix claimed to be a rotation is not orthogonal with det +1.
    #[error("invalid rotation matrix: {0}")]
    InvalidRotation(String),

    /// Scenario file problems: unreadable, malformed, or out-of-range fields.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
