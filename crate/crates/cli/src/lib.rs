//! Batch front end for the Dirac toolkit: configs in, exact reports out.

pub mod cache;
pub mod config;
pub mod report;
pub mod run;

use std::io::Write;
use std::path::Path;

use dirac_core::dirac::{DiracError, Status};
use dirac_core::liestruct::LieError;
use thiserror::Error;

/// Bumped whenever a normalization or basis ordering changes; part of every
/// cache key and report.
pub const CONVENTION_VERSION: &str = "1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("ConfigError: {}{message}", if field.is_empty() { String::new() } else { format!("field `{field}`: ") })]
    Config { field: String, message: String },
    #[error(transparent)]
    Domain(#[from] DiracError),
    #[error("IoError: {0}")]
    Io(String),
}

impl CliError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(DiracError::InternalInconsistency(_))
            | CliError::Domain(DiracError::Lie(LieError::InternalInconsistency(_))) => EXIT_FAIL,
            _ => EXIT_CONFIG,
        }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        CliError::Domain(e.into())
    }
}

impl From<dirac_core::rootdata::RootDataError> for CliError {
    fn from(e: dirac_core::rootdata::RootDataError) -> Self {
        CliError::Domain(e.into())
    }
}

impl From<dirac_core::repmod::RepError> for CliError {
    fn from(e: dirac_core::repmod::RepError) -> Self {
        CliError::Domain(e.into())
    }
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Pass => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
