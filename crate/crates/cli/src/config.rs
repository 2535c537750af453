//! Field-config files.
//!
//! A TOML file with one `[[field]]` table per field:
//!
//! ```toml
//! [[field]]
//! label = "K23"        # used in scheme expressions
//! degree = 3
//! r1 = 1
//! r2 = 1
//! disc = -23           # optional for degree >= 3
//!
//! [[field.splitting]]  # optional, needed only for numeric Euler products
//! p = 2
//! primes = [[1, 3]]    # one [e, f] pair per prime ideal above p
//! ```

use std::path::Path;

use cellzeta::fields::{make_number_field, FieldSpec, PrimeAbove};
use serde::Deserialize;

use crate::error::CliError;
use crate::parse::{is_valid_label, FieldTable};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    field: Vec<FieldRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldRecord {
    label: String,
    degree: u32,
    r1: u32,
    r2: u32,
    disc: Option<i64>,
    #[serde(default)]
    splitting: Vec<SplittingRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplittingRecord {
    p: u64,
    primes: Vec<(u32, u32)>,
}

impl FieldRecord {
    fn spec(&self) -> FieldSpec {
        let splitting = self
            .splitting
            .iter()
            .map(|s| {
                let mut merged: Vec<PrimeAbove> = Vec::new();
                for &(e, f) in &s.primes {
                    match merged
                        .iter_mut()
                        .find(|q| q.ramification == e && q.residue_degree == f)
                    {
                        Some(q) => q.count += 1,
                        None => merged.push(PrimeAbove {
                            ramification: e,
                            residue_degree: f,
                            count: 1,
                        }),
                    }
                }
                (s.p, merged)
            })
            .collect();
        FieldSpec {
            label: self.label.clone(),
            degree: self.degree,
            r1: self.r1,
            r2: self.r2,
            disc: self.disc,
            splitting,
        }
    }
}

/// Parses config text into a field table.
pub fn parse_fields(text: &str) -> Result<FieldTable, CliError> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| CliError::Parse(format!("field config: {e}")))?;
    let mut table = FieldTable::new();
    for record in &file.field {
        if !is_valid_label(&record.label) {
            return Err(CliError::Validation(format!(
                "field label '{}' must be an identifier other than Q, F or a scheme keyword",
                record.label
            )));
        }
        let field = make_number_field(&record.spec())
            .map_err(|e| CliError::Validation(format!("field {}: {e}", record.label)))?;
        if table.insert(field).is_some() {
            return Err(CliError::Validation(format!(
                "field label '{}' is defined twice",
                record.label
            )));
        }
    }
    Ok(table)
}

pub fn load_fields(path: &Path) -> Result<FieldTable, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_fields(&text)
}
