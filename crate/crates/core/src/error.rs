use thiserror::Error;

/// Errors reported by the modelling, design and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("integration diverged at t = {t} s (|state| > {bound})")]
    Divergence { t: f64, bound: f64 },

    #[error("steady state not reached within {max_time} s (last |d omega| per period = {last_delta:e} rad/s)")]
    NoConvergence { max_time: f64, last_delta: f64 },

    #[error("pull-out: rotor speed collapsed at t = {t} s under load {load} N*m")]
    PullOut { t: f64, load: f64 },

    #[error("unstable filter: pole magnitude {max_pole_magnitude}")]
    UnstableFilter { max_pole_magnitude: f64 },

    #[error("NTF is not minimum phase (zero magnitude {max_zero_magnitude}); use the error-feedback realization")]
    NonMinimumPhase { max_zero_magnitude: f64 },

    #[error("modulator state became non-finite at sample {index}")]
    Instability { index: usize },

    #[error("max gain {gamma} unreachable for order {order}: achievable range ({min}, {max})")]
    GainUnreachable {
        gamma: f64,
        order: usize,
        min: f64,
        max: f64,
    },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    SolverNoConvergence { iterations: usize, residual: f64 },

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
