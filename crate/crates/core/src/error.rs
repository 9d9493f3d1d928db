use thiserror::Error;

/// Errors raised by the game mathematics, the measurement backends, and the
/// experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside its admissible range (probability not in `[0,1]`,
    /// non-finite payoff, non-unit direction, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The single-sphere machine only measures pure (surface) states.
    #[error("unsupported state: {0}")]
    UnsupportedState(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::domain(format!("{name} must lie in [0, 1], got {value}")))
    }
}
