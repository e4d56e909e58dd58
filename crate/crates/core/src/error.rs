use alloc::string::String;

/// Errors raised by grid, field, norm, solver and monitor operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid {n1}x{n2}x{n3}: every axis needs an even sample count >= 4")]
    InvalidGrid { n1: usize, n2: usize, n3: usize },

    #[error("expected {expected} samples, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value at sample {index}")]
    NonFinite { index: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid axis {0}, expected 1, 2 or 3")]
    InvalidAxis(usize),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("sample {index}: {source}")]
    Sample {
        index: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    #[error("beta is infinite (1/p + 1/q + 1/r = 1); the criterion has no time integral, use sup-mode reporting")]
    BoundaryExponents,

    #[error("sample times are not monotone at index {index}")]
    NonMonotoneTimes { index: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("blow-up at step {step} (t = {t}): non-finite velocity")]
    BlowUp { step: u64, t: f64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
