//! RFC-4180-style CSV output: UTF-8, '.' decimal separator, mandatory
//! header row. Every file carries the effective config hash as its final
//! column so outputs are traceable.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

pub struct CsvWriter {
    out: std::io::BufWriter<std::fs::File>,
    columns: usize,
    config_hash: String,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &[&str], config_hash: &str) -> Result<Self> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let file = std::fs::File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        let mut out = std::io::BufWriter::new(file);
        let mut cols: Vec<&str> = header.to_vec();
        cols.push("config_hash");
        writeln!(out, "{}", cols.join(","))?;
        Ok(CsvWriter {
            out,
            columns: header.len(),
            config_hash: config_hash.to_string(),
        })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        assert_eq!(fields.len(), self.columns, "column count mismatch");
        let mut line = fields
            .iter()
            .map(|f| escape(f))
            .collect::<Vec<_>>()
            .join(",");
        line.push(',');
        line.push_str(&self.config_hash);
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

fn escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Format a float with full round-trip precision.
pub fn num(x: f64) -> String {
    format!("{x:.17e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping() {
        assert_eq!(escape("plain"), "plain");
        assert_eq!(escape("a,b"), "\"a,b\"");
        assert_eq!(escape("q\"q"), "\"q\"\"q\"");
    }
}
