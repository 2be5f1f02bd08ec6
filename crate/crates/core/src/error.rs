use thiserror::Error;

/// Failure modes shared by every module.
///
/// The variants map onto the process exit codes used by the command line
/// tool: usage and capability errors are the caller's problem, data errors
/// mean a mathematical check did not hold, internal errors indicate a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("check failed: {0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Precondition(_) | Error::Capability(_) => 3,
            Error::Data(_) => 2,
            Error::Internal(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! usage {
    ($($arg:tt)*) => { $crate::error::Error::Usage(format!($($arg)*)) };
}
macro_rules! precondition {
    ($($arg:tt)*) => { $crate::error::Error::Precondition(format!($($arg)*)) };
}
macro_rules! capability {
    ($($arg:tt)*) => { $crate::error::Error::Capability(format!($($arg)*)) };
}
macro_rules! data_err {
    ($($arg:tt)*) => { $crate::error::Error::Data(format!($($arg)*)) };
}
macro_rules! internal {
    ($($arg:tt)*) => { $crate::error::Error::Internal(format!($($arg)*)) };
}
pub(crate) use {capability, data_err, internal, precondition, usage};
