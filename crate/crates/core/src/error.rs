use thiserror::Error;

/// Errors shared by the expression, ODE and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },

    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("domain error at byte {offset}: {reason}")]
    EvalDomain { offset: usize, reason: String },

    #[error("step count exceeded ({max_steps}) at t = {t}")]
    StepLimit { t: f64, max_steps: usize },

    #[error("non-finite state detected at t = {t}")]
    NonFinite { t: f64 },

    #[error("sample grids do not match: {0}")]
    GridMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("auxiliary amplitude reached zero at t = {t}")]
    AmplitudeCollapse { t: f64 },
}
