pub mod encode;
pub mod sensory;
pub mod simulate;
pub mod te;
pub mod trace;
pub mod viability;

use std::fs::File;
use std::path::Path;

use effcomm::scenario::load_trace_csv;
use effcomm::RsrpTrace;

use crate::error::{CliError, Result};

pub fn read_trace(path: &Path) -> Result<RsrpTrace> {
    let file = File::open(path).map_err(CliError::io(path))?;
    load_trace_csv(file).map_err(|source| CliError::Trace {
        path: path.to_path_buf(),
        source,
    })
}
