//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// `k` must satisfy `1 <= k <= n - 1`.
    #[error("k = {k} out of range for sample size n = {n} (need 1 <= k <= n-1)")]
    KOutOfRange { k: usize, n: usize },

    /// The threshold order statistic ties with the relevant top order
    /// statistic, so log-ratios degenerate.
    #[error("tied extremes at k = {k}: threshold equals the top order statistic")]
    TiedExtremes { k: usize },

    /// The tail-index equation has no solution: the sample sits at or past
    /// the light-truncation boundary. Callers may fall back to `1/hill`.
    #[error("no root: hill = {hill} >= -ln(ratio)/2 = {bound}")]
    NoRoot { hill: f64, bound: f64 },

    /// Both Newton and the bisection safeguard failed to meet the residual
    /// tolerance.
    #[error("tail-index solve did not converge")]
    NonConvergence,

    /// Hill statistic is zero where a positive value is required.
    #[error("hill statistic is zero")]
    ZeroHill,

    /// Log-moments collapse: `M2 = 0` or `M1^2 = M2`.
    #[error("degenerate log-moments (M2 = 0 or M1^2 = M2)")]
    DegenerateMoments,

    /// The ratio average equals one, so the odds statistic is undefined.
    #[error("ratio average E equals 1 (tied top values)")]
    DegenerateRatioAverage,

    /// `delta(kappa)` underflowed to a non-positive value.
    #[error("delta(kappa) <= 0 in floating point at kappa = {kappa}")]
    NonpositiveDelta { kappa: f64 },

    /// Every anchor candidate failed during selection.
    #[error("no usable anchor candidate")]
    NoCandidate,

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("model spec error at `{token}`: {reason}")]
    ModelParse { token: String, reason: String },

    #[error("{path}:{line}: {reason}")]
    Dataset {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
