use thiserror::Error;

/// Errors raised by the engine.
///
/// `Consistency` is reserved for disagreements between two independent
/// decision routes; it is never silently resolved.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Process exit status for this error: 1 for consistency failures, 2 for
    /// exhausted budgets, 3 for usage and input problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Consistency(_) => 1,
            Error::Budget(_) => 2,
            Error::Input(_) | Error::Precondition(_) | Error::Config(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
