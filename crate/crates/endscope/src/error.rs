use std::path::PathBuf;

use endscope_core::Error;

pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(thiserror::Error, Debug)]
pub enum Failure {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Failure::Io { path: path.into(), source }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl std::fmt::Display) -> Self {
        Failure::Parse { path: path.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(e) if e.is_budget() => EXIT_BUDGET,
            Failure::Io { .. } => EXIT_BUDGET,
            Failure::Usage(_) => EXIT_USAGE,
            _ => EXIT_PRECONDITION,
        }
    }
}

pub type Result<T, E = Failure> = std::result::Result<T, E>;
