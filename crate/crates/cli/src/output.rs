//! Schema-checked writers for the output directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::schema;

/// Output directory of a run.
pub struct Output {
    dir: PathBuf,
}

impl Output {
    /// Creates the directory if needed.
    pub fn new(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    fn write(&self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Validates a JSON value and writes it pretty-printed.
    pub fn json(&self, name: &str, schema_name: &str, value: &Value) -> CliResult<()> {
        schema::validate(schema_name, value)?;
        let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Validates each row as a JSON object and writes the rows as CSV.
    pub fn csv<T: Serialize>(&self, name: &str, schema_name: &str, rows: &[T]) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            let v = serde_json::to_value(r).expect("rows serialize");
            schema::validate(schema_name, &v)?;
            w.serialize(r).map_err(|e| CliError::Io {
                path: name.into(),
                source: std::io::Error::other(e),
            })?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io {
            path: name.into(),
            source: e.into_error(),
        })?;
        self.write(name, &bytes)
    }
}
