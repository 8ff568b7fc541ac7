use std::fs::File;
use std::path::Path;

use effcomm::scenario::{generate_trace, save_trace_csv};
use effcomm::{RsrpTrace, TraceEvent};
use serde::Serialize;

use crate::cmd::read_trace;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::write_json;
use crate::TraceCommand;

#[derive(Serialize)]
struct TraceJson<'a> {
    start_time: f64,
    slot_duration: f64,
    cells: &'a [String],
    rows: &'a [Vec<f64>],
    events: &'a [TraceEvent],
    clamped: usize,
}

pub fn execute(cmd: &TraceCommand) -> Result<()> {
    match cmd {
        TraceCommand::Validate { trace } => {
            let t = read_trace(trace)?;
            println!(
                "{}: {} slots x {} cells ({}), slot {} s, {} samples clamped",
                trace.display(),
                t.len(),
                t.num_cells(),
                t.cells.join(", "),
                t.slot_duration,
                t.clamped
            );
            Ok(())
        }
        TraceCommand::Convert { input, output } => {
            let t = read_trace(input)?;
            write_trace(&t, output)
        }
        TraceCommand::Generate {
            config,
            seed,
            horizon,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => RunConfig::load(path)?,
                None => RunConfig::default(),
            };
            if let Some(seed) = seed {
                cfg.sim.seed = *seed;
            }
            let horizon = horizon.unwrap_or(cfg.sim.horizon);
            let t = generate_trace(&cfg.sim.mobility_with_seed(), horizon)
                .map_err(|e| CliError::InvalidConfig(e.to_string()))?;
            write_trace(&t, out)
        }
    }
}

/// CSV unless the extension is `.json`.
fn write_trace(trace: &RsrpTrace, path: &Path) -> Result<()> {
    if path.extension().is_some_and(|e| e == "json") {
        return write_json(
            path,
            &TraceJson {
                start_time: trace.start_time,
                slot_duration: trace.slot_duration,
                cells: &trace.cells,
                rows: trace.rows(),
                events: &trace.events,
                clamped: trace.clamped,
            },
        );
    }
    let file = File::create(path).map_err(CliError::io(path))?;
    save_trace_csv(trace, file).map_err(|source| CliError::Trace {
        path: path.to_path_buf(),
        source,
    })
}
