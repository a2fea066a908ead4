use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spin count must be at least 1")]
    ZeroSpins,
    #[error("magnetic quantum number {m} outside the admissible range for S = {s}")]
    MagneticOutOfRange { s: f64, m: f64 },
    #[error("cluster parameter k = {k} outside [1, {n}]")]
    ClusterOutOfRange { k: usize, n: usize },
    #[error("sum rule violated: intensities sum to {sum} (deviation {deviation:e})")]
    SumRule { sum: f64, deviation: f64 },
    #[error("dense oracle limited to N <= {max}, got N = {n}")]
    DenseTooLarge { n: usize, max: usize },
    #[error("phase grid of {grid} points aliases orders up to {max_order}; need at least {required}")]
    Aliasing {
        grid: usize,
        max_order: usize,
        required: usize,
    },
    #[error("Zeeman exponent {0} overflows after rescaling")]
    ZeemanOverflow(f64),
    #[error("empty report list")]
    EmptyReports,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
