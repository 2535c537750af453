//! Command-line frontend for `cellzeta`: scheme-expression parsing,
//! field-config ingestion and report rendering.

pub mod app;
pub mod config;
pub mod error;
pub mod output;
pub mod parse;

pub use app::run_cli;
pub use error::CliError;
pub use parse::{parse_scheme, FieldTable, ParseError, ParseErrorKind};
