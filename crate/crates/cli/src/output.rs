use std::fs;
use std::io::Write;
use std::path::PathBuf;

use bonnesen_core::io::{write_csv, write_text};
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;
use crate::scenario::Format;

/// A named result: always JSON, optionally also a CSV table.
pub struct Artifact {
    pub name: String,
    pub json: Value,
    pub csv: Option<String>,
}

impl Artifact {
    pub fn report<T: Serialize>(name: &str, value: &T) -> Result<Self, CliError> {
        Ok(Artifact { name: name.into(), json: serde_json::to_value(value)?, csv: None })
    }

    /// A JSON document with a CSV table of its rows.
    pub fn with_table<T: Serialize, R: Serialize>(name: &str, value: &T, rows: &[R]) -> Result<Self, CliError> {
        let table = Self::table(name, rows)?;
        Ok(Artifact { json: serde_json::to_value(value)?, ..table })
    }

    /// A table of rows; its JSON form is the array of rows.
    pub fn table<T: Serialize>(name: &str, rows: &[T]) -> Result<Self, CliError> {
        let mut buf = Vec::new();
        write_csv(&mut buf, rows)?;
        let csv = String::from_utf8(buf).map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(Artifact { name: name.into(), json: serde_json::to_value(rows)?, csv: Some(csv) })
    }
}

/// Writes every artifact into `dir`, or the primary one to stdout: the
/// first artifact as JSON, or the first table as CSV.
pub fn emit(artifacts: &[Artifact], dir: Option<&PathBuf>, format: Format) -> Result<(), CliError> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            for a in artifacts {
                match (&a.csv, format) {
                    (Some(csv), Format::Csv) => write_text(&dir.join(format!("{}.csv", a.name)), csv)?,
                    _ => write_text(&dir.join(format!("{}.json", a.name)), &serde_json::to_string_pretty(&a.json)?)?,
                }
            }
            Ok(())
        }
        None => {
            let text = match format {
                Format::Json => artifacts.first().map(|a| serde_json::to_string_pretty(&a.json)).transpose()?,
                Format::Csv => artifacts
                    .iter()
                    .find_map(|a| a.csv.clone())
                    .or(artifacts.first().map(|a| serde_json::to_string_pretty(&a.json)).transpose()?),
            };
            if let Some(text) = text {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                if !text.ends_with('\n') {
                    out.write_all(b"\n")?;
                }
            }
            Ok(())
        }
    }
}
