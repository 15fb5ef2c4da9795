use thiserror::Error;

/// Errors produced while constructing states, models, grids, or estimates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("direction vector has zero length and cannot be normalized")]
    ZeroDirection,

    #[error("state vector is not normalized: |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("state vector has zero norm and cannot be normalized")]
    ZeroState,

    #[error("time grid needs at least 2 times, got {n}")]
    TooFewTimes { n: usize },

    #[error("time horizon must be positive, got {horizon}")]
    NonPositiveHorizon { horizon: f64 },

    #[error("time {t} lies outside [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },

    #[error("estimator needs at least 2 lambda samples, got {m}")]
    TooFewLambdas { m: usize },

    #[error("time grids must have equal length, got {n_a} and {n_b}")]
    GridLengthMismatch { n_a: usize, n_b: usize },

    #[error(
        "cannot draw later times: grid already reaches {t_max} with horizon {horizon}"
    )]
    OrderingUnsatisfiable { t_max: f64, horizon: f64 },

    #[error("{name} must lie in [0, 1], got {value}")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("{name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("unknown model name `{name}`")]
    UnknownModel { name: String },

    #[error("model `{model}` does not accept parameter `{name}`")]
    UnknownParameter { model: &'static str, name: String },

    #[error("discrete support weights must be positive, got {value}")]
    NonPositiveWeight { value: f64 },

    #[error("discrete support weights must sum to 1, got {sum}")]
    WeightsNotNormalized { sum: f64 },

    #[error("discrete support must not be empty")]
    EmptySupport,

    #[error("outcome table for lambda index {index} has {got} entries, expected {expected}")]
    TableShapeMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },

    #[error("model `{name}` has no discrete support; exact enumeration is unavailable")]
    NoDiscreteSupport { name: String },

    #[error("encountered a non-finite value in {what}")]
    NonFinite { what: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
