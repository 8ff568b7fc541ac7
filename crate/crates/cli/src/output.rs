use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, Result};

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

/// Pretty JSON with a trailing newline. Field order follows the types, so
/// equal values always give identical bytes.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(CliError::io(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    writeln!(w).and_then(|_| w.flush()).map_err(CliError::io(path))
}

/// One series per file with a header row.
pub fn write_csv<R, I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: ToString,
{
    let to_data = |e: csv::Error| CliError::Data(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(to_data)?;
    w.write_record(header).map_err(to_data)?;
    for row in rows {
        let record: Vec<String> = row.into_iter().map(|v| v.to_string()).collect();
        w.write_record(&record).map_err(to_data)?;
    }
    w.flush().map_err(CliError::io(path))
}
