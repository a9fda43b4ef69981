use thiserror::Error;

/// Errors raised when a value violates the contract of a model type or operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NomaError {
    #[error("number of users m must be at least 1")]
    NoUsers,

    #[error("{name} must be a finite positive number, got {value}")]
    NotPositive { name: &'static str, value: f64 },

    #[error("high-mode power v1 ({v1}) must exceed low-mode power v2 ({v2})")]
    PowerOrder { v1: f64, v2: f64 },

    #[error("{name} must lie in [0, 1], got {value}")]
    ProbabilityRange { name: &'static str, value: f64 },

    #[error("tau1 + tau2 must not exceed 1, got {tau1} + {tau2} = {}", tau1 + tau2)]
    ProbabilitySum { tau1: f64, tau2: f64 },

    #[error("count pair ({n1}, {n2}) exceeds the {m} users of the scenario")]
    CountExceedsUsers { n1: usize, n2: usize, m: usize },

    #[error("decoding index {index} outside 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("pair ({n1}, {n2}) lies outside feasible region ({region})")]
    OutsideRegion { region: char, n1: usize, n2: usize },

    #[error("channel gain must be positive, got {0}")]
    NonPositiveGain(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, NomaError>;
