use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("time {t} lies outside the driving window [0, {tau}]")]
    Domain { t: f64, tau: f64 },

    #[error("time {t} coincides with pulse {pulse}; the derivative jumps there, select a side")]
    AmbiguousPulseTime { t: f64, pulse: usize },

    #[error("final population {p_tau} equals the initial one; the speed-limit ratio is 0/0")]
    DegenerateTarget { p_tau: f64 },

    #[error("{what} exceeds capacity: {requested} > {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
