use thiserror::Error;

/// Errors raised by sampling, graph construction and the estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PercoError {
    /// Invalid parameters: bad window, τ ≤ 1, λ_low > λ_high, ...
    #[error("configuration error: {0}")]
    Config(String),

    /// A sample or pair enumeration would exceed the configured budget.
    #[error("resource limit exceeded: {what} requires about {required}, budget is {budget}; {advice}")]
    Resource {
        what: &'static str,
        required: f64,
        budget: f64,
        advice: &'static str,
    },

    /// An operation was called on a model variant it does not support.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The simulation window does not contain the region an event needs.
    #[error("window does not cover {needed}: event requires B({center:?}, {radius})")]
    WindowCoverage {
        needed: &'static str,
        center: Vec<f64>,
        radius: f64,
    },

    /// Results that contradict an exact coupling or inclusion.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, PercoError>;
