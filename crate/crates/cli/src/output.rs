use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cli::Format;
use crate::error::CliError;

pub fn cx(c: Complex64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

/// Shortest round-trip text for a float, as in the JSON output.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        String::new()
    }
}

/// What a command produced: a JSON document and, where it makes sense, a table.
pub struct Report {
    pub json: Value,
    pub table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.json).map_err(|e| CliError::input(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let (header, rows) =
                    self.table.as_ref().ok_or_else(|| CliError::input("this command has no CSV form"))?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(header).map_err(|e| CliError::input(e.to_string()))?;
                for r in rows {
                    w.write_record(r).map_err(|e| CliError::input(e.to_string()))?;
                }
                w.into_inner().map_err(|e| CliError::input(e.to_string()))
            }
        }
    }

    pub fn emit(&self, format: Format, output: Option<&Path>) -> Result<(), CliError> {
        let bytes = self.render(format)?;
        match output {
            Some(p) => std::fs::write(p, bytes)?,
            None => std::io::stdout().lock().write_all(&bytes)?,
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(f64::NAN), "");
        assert_eq!(cx(Complex64::new(1.0, -2.0)), json!({ "re": 1.0, "im": -2.0 }));
    }

    #[test]
    fn csv_needs_a_table() {
        let r = Report { json: json!({}), table: None };
        assert!(r.render(Format::Csv).is_err());
        let r = Report { json: json!({}), table: Some((vec!["a"], vec![vec!["1".into()]])) };
        assert_eq!(r.render(Format::Csv).unwrap(), b"a\n1\n");
    }
}
