use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weights p={p}, q={q}: {reason}")]
    InvalidWeights { p: String, q: String, reason: String },

    #[error("angle {0} rad is not one of the admissible values 0, ±π/3, ±2π/3, −π")]
    InadmissibleAngle(f64),

    #[error("lines {0} and {1} share a direction family and do not intersect")]
    ParallelLines(u32, u32),

    /// Probability-zero configuration detected; the caller should resample.
    #[error("degenerate realization: {0}")]
    Degenerate(String),

    #[error("no usable cells: {0}")]
    EmptySample(String),

    /// An interior face reported a vertex count outside 3..=6. This aborts the
    /// run because it can only come from an arrangement bug.
    #[error("interior face with {0} vertices violates the 3..=6 support")]
    SupportViolation(usize),

    #[error(
        "quadrature for case {label} missed target accuracy {requested:e} \
         (achieved {achieved:e}, estimate {estimate})"
    )]
    QuadratureAccuracy {
        label: String,
        requested: f64,
        achieved: f64,
        estimate: f64,
    },

    #[error("rejection sampling stalled after {attempts} attempts in case {label}")]
    SamplerStall { label: String, attempts: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
