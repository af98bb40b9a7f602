use thiserror::Error;

/// Errors produced by the shape library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeError {
    /// A row of a point-list file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// The shape collapses to something without usable area or extent.
    #[error("degenerate shape: {0}")]
    Degenerate(String),

    /// A caller supplied an argument outside the operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The boundary profile is (numerically) constant, so no seed point exists.
    #[error("no distinct extrema: {0}")]
    NoDistinctExtrema(String),

    /// Two extrema sets have different cardinality and cannot be aligned.
    #[error("extrema sets cannot be aligned: {left} vs {right} members")]
    Alignment { left: usize, right: usize },

    /// Raster boundary tracing failed.
    #[error("trace error: {0}")]
    Trace(String),

    /// The denominator of a spectral ratio is too close to zero.
    #[error("unstable frequency pair: |X({omega2})| is below the guard{}", suggestion(.suggested))]
    UnstableFrequencyPair { omega2: f64, suggested: Option<f64> },

    /// A spectrum was queried at a frequency it does not hold.
    #[error("frequency {0} is not sampled by this spectrum")]
    FrequencyNotSampled(f64),

    /// Adaptive quadrature ran out of subdivision depth.
    #[error("quadrature did not converge on [{lo}, {hi}] (error estimate {error_estimate:e})")]
    Quadrature {
        lo: f64,
        hi: f64,
        error_estimate: f64,
    },

    /// A value fell outside the domain of a mathematical function (log of a non-positive number).
    #[error("domain error: {0}")]
    Domain(String),

    /// Reading input failed.
    #[error("i/o error: {0}")]
    Io(String),
}

fn suggestion(s: &Option<f64>) -> String {
    match s {
        Some(w) => format!("; try omega2 = {w}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, ShapeError>;
