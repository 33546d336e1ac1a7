//! Report emission: deterministic JSON (pretty, trailing newline) and CSV
//! with '.' decimals and 17 significant digits.

use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use crate::io::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Round-trip-faithful float text: 17 significant digits, no locale.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_report(out: &Option<PathBuf>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, body)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
    body.push('\n');
    Ok(body)
}

/// CSV body from a header and rows of preformatted cells.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut body = String::new();
    body.push_str(&header.join(","));
    body.push('\n');
    for row in rows {
        body.push_str(&row.join(","));
        body.push('\n');
    }
    body
}
