//! Line-delimited JSON reading and writing.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, ValidationError};

/// Read every non-blank line of `path` as `T`; the first bad line is an error.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, Error> {
    let file = File::open(path).map_err(|e| Error::read(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::read(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| Error::Line {
            path: path.to_path_buf(),
            line: i + 1,
            source: ValidationError::new("$", e.to_string()),
        })?;
        out.push(item);
    }
    Ok(out)
}

/// Write one compact JSON object per line.
pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), Error> {
    let file = File::create(path).map_err(|e| Error::write(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        let line = serde_json::to_string(item).expect("value serializes");
        writeln!(w, "{line}").map_err(|e| Error::write(path, e))?;
    }
    w.flush().map_err(|e| Error::write(path, e))
}

/// Write pre-serialized lines.
pub fn write_lines(path: &Path, lines: &[String]) -> Result<(), Error> {
    let file = File::create(path).map_err(|e| Error::write(path, e))?;
    let mut w = BufWriter::new(file);
    for line in lines {
        writeln!(w, "{line}").map_err(|e| Error::write(path, e))?;
    }
    w.flush().map_err(|e| Error::write(path, e))
}
