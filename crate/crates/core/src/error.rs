use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid window: j_min = {j_min} exceeds j_max = {j_max}")]
    InvalidWindow { j_min: i64, j_max: i64 },

    #[error("digit expansion of length {len} exceeds the cap of {cap} digits")]
    DigitOverflow { len: usize, cap: usize },

    #[error("{0} has no finite p-adic digit expansion")]
    InfiniteExpansion(String),

    #[error("constant diverges: {0}")]
    DivergentConstant(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Picard iteration did not converge after {} iterations (last residual {:e})", .residuals.len(), .residuals.last().copied().unwrap_or(f64::NAN))]
    IterationDiverged { residuals: Vec<f64> },

    #[error("existence estimate failed: {0}")]
    EstimateFailed(String),
}
