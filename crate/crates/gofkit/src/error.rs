use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,

    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    #[error("need at least {min} observations, got {got}")]
    TooFewObservations { min: usize, got: usize },

    #[error("sample size {n} outside supported range {min}..={max}")]
    SampleSizeOutOfRange { n: usize, min: usize, max: usize },

    #[error("degenerate sample: zero variance")]
    DegenerateSample,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("binning left fewer than 2 classes")]
    DegenerateBinning,

    #[error("no degrees of freedom left ({classes} classes, {params} fitted parameters)")]
    InsufficientDf { classes: usize, params: usize },

    #[error("model CDF underflows to 0 or 1 at value {value}")]
    NumericalUnderflow { value: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
