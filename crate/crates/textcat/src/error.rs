use thiserror::Error;

/// Categorized toolkit error. The CLI maps each category to a distinct
/// process exit code, so library code should pick the category that
/// describes the root cause, not the stage it surfaced in.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad input data: missing paths, malformed corpora or model files,
    /// unknown labels, dimension mismatches between data and model.
    #[error("input error: {0}")]
    Input(String),

    /// Bad configuration: out-of-range thresholds, unknown keys,
    /// unsupported parameter combinations.
    #[error("config error: {0}")]
    Config(String),

    /// Numerical failure: singular systems, defective decompositions,
    /// degenerate data.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Internal consistency violation; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Prefix the message with a pipeline stage name, keeping the category.
    pub fn in_stage(self, stage: &str) -> Self {
        match self {
            Error::Input(m) => Error::Input(format!("{stage}: {m}")),
            Error::Config(m) => Error::Config(format!("{stage}: {m}")),
            Error::Numerical(m) => Error::Numerical(format!("{stage}: {m}")),
            Error::Internal(m) => Error::Internal(format!("{stage}: {m}")),
        }
    }

    /// Process exit code: 1 input, 2 config, 3 numerical (internal errors
    /// are reported as numerical failures).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 1,
            Error::Config(_) => 2,
            Error::Numerical(_) | Error::Internal(_) => 3,
        }
    }
}
