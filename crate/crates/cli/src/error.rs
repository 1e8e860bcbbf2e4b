use opinv_core::connect::ConnectError;
use opinv_core::invar::InvarError;
use opinv_core::models::ModelError;
use opinv_core::{Error as CoreError, ParseError};
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const DISTINCT: u8 = 2;
    pub const INCONCLUSIVE: u8 = 3;
    pub const USAGE: u8 = 64;
    pub const DATA: u8 = 65;
    pub const INTERNAL: u8 = 70;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: {source}")]
    Input { path: String, source: ParseError },
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Read { .. } | CliError::Input { .. } => exit::DATA,
            CliError::Write { .. } => exit::INTERNAL,
            CliError::Core(e) if is_internal(e) => exit::INTERNAL,
            CliError::Core(_) => exit::DATA,
        }
    }
}

fn is_internal(e: &CoreError) -> bool {
    let invar = |e: &InvarError| matches!(e, InvarError::Internal(_));
    match e {
        CoreError::Invar(i) => invar(i),
        CoreError::Connect(ConnectError::Internal(_)) => true,
        CoreError::Model(ModelError::Invar(i)) => invar(i),
        CoreError::Model(ModelError::Connect(ConnectError::Internal(_))) => true,
        CoreError::Equiv(opinv_core::equiv::EquivError::Invar(i)) => invar(i),
        _ => false,
    }
}

macro_rules! core_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

core_from!(
    opinv_core::PolyError,
    opinv_core::transvect::TransvectError,
    InvarError,
    opinv_core::equiv::EquivError,
    ConnectError,
    ModelError
);
