use thiserror::Error;

/// Errors produced by the algebra and group machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),

    #[error("group too large: closure exceeded cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("too many subspaces: {count} exceeds cap of {cap}")]
    TooManySubspaces { count: u64, cap: u64 },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 = theorem fail (handled elsewhere),
    /// 2 = capacity, 3 = input/validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity(_)
            | Error::GroupTooLarge { .. }
            | Error::TooManySubspaces { .. }
            | Error::Inconsistency(_) => 2,
            _ => 3,
        }
    }
}
