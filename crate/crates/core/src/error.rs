use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied an argument outside the operation's contract.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Input lies outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical self-check failed (residuals, conservation, ...).
    #[error("numerical consistency failure: {0}")]
    Consistency(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! arg_err {
    ($($t:tt)*) => { $crate::Error::Argument(format!($($t)*)) };
}
pub(crate) use arg_err;
