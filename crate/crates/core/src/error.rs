use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("delay must be non-negative, got {0}")]
    NegativeDelay(f64),

    #[error(
        "delay {tau} is shorter than the step size {h}; method of steps needs tau = 0 or tau >= h"
    )]
    DelayBelowStep { tau: f64, h: f64 },

    #[error("state diverged at t = {t}")]
    Diverged { t: f64 },

    #[error("delayed query at t = {t_query} lies beyond the integrated time {t_current}")]
    Causality { t_query: f64, t_current: f64 },

    #[error("arccos argument {0} lies outside [-1, 1]")]
    NoCriticalDelay(f64),

    #[error("series too short: need {needed} samples, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid parameter range: {0}")]
    InvalidRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
