use cellzeta::cells::CellError;
use cellzeta::fields::FieldError;
use cellzeta::kweights::KWeightsError;
use cellzeta::lfun::LError;
use cellzeta::verify::VerifyError;
use thiserror::Error;

use crate::parse::{ParseError, ParseErrorKind};

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a verification found a mismatch.
pub const EXIT_MISMATCH: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Unsupported(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e.kind {
            ParseErrorKind::Syntax => CliError::Parse(e.to_string()),
            ParseErrorKind::Invalid => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::UnsupportedField { .. }
            | FieldError::OutsideConvergence(_)
            | FieldError::Domain { .. } => CliError::Unsupported(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CellError> for CliError {
    fn from(e: CellError) -> Self {
        match e {
            CellError::Field(inner) => inner.into(),
            CellError::Overflow
            | CellError::NumberFieldBase(_)
            | CellError::MixedBases(..)
            | CellError::TooLarge { .. } => CliError::Unsupported(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<KWeightsError> for CliError {
    fn from(e: KWeightsError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<LError> for CliError {
    fn from(e: LError) -> Self {
        match e {
            LError::Cells(inner) => inner.into(),
            LError::Field(inner) => inner.into(),
            LError::Cover(inner) => inner.into(),
            LError::Series(_) | LError::Domain(_) | LError::NotFinite => {
                CliError::Unsupported(e.to_string())
            }
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Cells(inner) => inner.into(),
            VerifyError::Weights(inner) => inner.into(),
            VerifyError::EmptyRange(..) | VerifyError::EmptyFamily(_) => {
                CliError::Validation(e.to_string())
            }
        }
    }
}
