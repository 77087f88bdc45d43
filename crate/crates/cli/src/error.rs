use std::path::PathBuf;

use qfp_core::verify::VerifyError;
use qfp_core::QcError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid argument: {0}")]
    Args(String),
    #[error("trace error: {0}")]
    Trace(String),
    #[error(transparent)]
    Oracle(#[from] QcError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
