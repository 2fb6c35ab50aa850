use std::fmt;

/// Errors raised by the sampling and reconstruction routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("value {value} is not a dyadic rational with {frac_depth} fractional bits")]
    NotRepresentable { value: f64, frac_depth: u32 },

    #[error("negative input {0} where a non-negative value is required")]
    Negative(f64),

    #[error("argument {0} lies outside [0, 1)")]
    OutsideUnitInterval(f64),

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported Daubechies order {0} (supported: 1..=10)")]
    UnsupportedOrder(usize),

    #[error("invalid wavelet spec: {0}")]
    InvalidSpec(String),

    #[error("invalid sampling spec: {0}")]
    InvalidSampling(String),

    #[error("refinement eigenproblem failed: {0}")]
    Eigen(String),

    #[error("Gram-Schmidt breakdown at column {column}: residual norm {residual:e}")]
    DependentColumns { column: usize, residual: f64 },

    #[error("frequency {freq} exceeds grid resolution 2^{depth}; increase q")]
    FrequencyExceedsGrid { freq: usize, depth: u32 },

    #[error("below stable sampling rate: sigma_min = {sigma_min:e}, mu = {mu:e}")]
    BelowSamplingRate { sigma_min: f64, mu: f64 },

    #[error("theta must lie in (1, 100], got {0}")]
    InvalidTheta(f64),

    #[error("Hoelder exponent must exceed 1/2, got {0}")]
    InvalidAlpha(f64),

    #[error("stable sampling rate search exceeded M = {cap} ({})", TraceDisplay(.trace))]
    SearchCapExceeded { cap: usize, trace: Vec<(usize, f64)> },

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

struct TraceDisplay<'a>(&'a [(usize, f64)]);

impl fmt::Display for TraceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trace:")?;
        for (m, mu) in self.0 {
            write!(f, " ({m}, {mu:.4})")?;
        }
        Ok(())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
