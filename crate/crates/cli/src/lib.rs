//! Experiment driver behind the `fpp` binary.

use std::io;
use std::path::{Path, PathBuf};

pub mod commands;
pub mod config;
pub mod experiments;
pub mod output;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: fpp_core::Error,
    },

    #[error(transparent)]
    Core(#[from] fpp_core::Error),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn config_at(line: usize, msg: impl std::fmt::Display) -> Self {
        CliError::Config(format!("line {line}: {msg}"))
    }

    pub fn input(path: &Path) -> impl FnOnce(fpp_core::Error) -> CliError + '_ {
        move |source| CliError::Input {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        use fpp_core::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Input { source, .. } | CliError::Core(source) => match source {
                E::ResourceCap(_) => EXIT_RESOURCE,
                E::InvalidParameter(_) | E::Parse { .. } | E::NoMalthusian { .. } => EXIT_CONFIG,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
