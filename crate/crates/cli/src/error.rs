use std::path::PathBuf;

use metalogic::consequence::ConsequenceError;
use metalogic::cpl::CplError;
use metalogic::deduction::StoreError;
use metalogic::oracle::OracleError;
use metalogic::ParseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}:{error}", .source_name)]
    Parse { source_name: String, error: ParseError },
    #[error("{0}")]
    Resource(String),
    #[error("{path}: {error}")]
    Io { path: PathBuf, error: std::io::Error },
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn parse(source_name: impl Into<String>, error: ParseError) -> Self {
        CliError::Parse { source_name: source_name.into(), error }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } => 3,
            CliError::Resource(_) => 4,
            CliError::Io { .. } | CliError::Other(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Resource(_) => "resource",
            CliError::Io { .. } => "io",
            CliError::Other(_) => "other",
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge(_) | OracleError::TooManyVariables { .. } => CliError::Resource(e.to_string()),
            e => CliError::Other(e.to_string()),
        }
    }
}

impl From<ConsequenceError> for CliError {
    fn from(e: ConsequenceError) -> Self {
        match e {
            ConsequenceError::TooManyAtoms { .. } => CliError::Resource(e.to_string()),
            e => CliError::Other(e.to_string()),
        }
    }
}

impl From<CplError> for CliError {
    fn from(e: CplError) -> Self {
        match e {
            CplError::Oracle(e) => e.into(),
            e => CliError::Other(e.to_string()),
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Parse { name, error } => CliError::parse(format!("lemma {name}"), error),
            e => CliError::Other(e.to_string()),
        }
    }
}
