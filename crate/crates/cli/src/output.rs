use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use qpmid::polycore::Polynomial;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Output(e.to_string()))
}

/// Coefficients as exact rational strings, ascending powers.
pub fn poly_strings(p: &Polynomial) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

pub fn complex(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// The command line as typed, quoted where needed.
pub fn invocation() -> String {
    let mut args = std::env::args();
    let mut parts = vec!["qpmid".to_string()];
    args.next();
    for a in args {
        if a.is_empty() || a.chars().any(|c| c.is_whitespace() || c == '"' || c == '\'') {
            parts.push(format!("'{}'", a.replace('\'', "'\\''")));
        } else {
            parts.push(a);
        }
    }
    parts.join(" ")
}

/// Shortest decimal that reads back as the same `f64`.
pub fn float_field(x: f64) -> String {
    format!("{x:?}")
}

/// Writes a CSV file: a comment line with the invocation, a header row and
/// the records.
pub fn write_csv<I>(path: &Path, header: &[String], rows: I) -> Result<usize, CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let err = |e: &dyn std::fmt::Display| CliError::Output(format!("{}: {e}", path.display()));
    let mut file = std::fs::File::create(path).map_err(|e| err(&e))?;
    writeln!(file, "# {}", invocation()).map_err(|e| err(&e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header).map_err(|e| err(&e))?;
    let mut count = 0;
    for r in rows {
        w.write_record(&r).map_err(|e| err(&e))?;
        count += 1;
    }
    w.flush().map_err(|e| err(&e))?;
    Ok(count)
}

pub fn print_json(v: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Output(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Output(e.to_string())),
        _ => Ok(()),
    }
}
