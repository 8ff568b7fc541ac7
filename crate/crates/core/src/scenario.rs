//! RSRP traces: synthetic generation along a one-dimensional route and a
//! drive-test style CSV format.
//!
//! The CSV header is `t,<cell>,...,<cell>,event` where the first cell column
//! is the primary cell. `t` is in seconds with a fixed step, RSRP columns are
//! decimal dBm, and `event` is one of [`TraceEvent`]'s tags.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const RSRP_MIN_DBM: f64 = -140.0;
pub const RSRP_MAX_DBM: f64 = -44.0;

/// Relative tolerance on the fixed time step when reading `t`.
const STEP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("trace has no cells")]
    NoCells,
    #[error("cell {cell} has {got} slots, expected {expected}")]
    Ragged {
        cell: usize,
        got: usize,
        expected: usize,
    },
    #[error("slot {slot} has {got} values, expected one per cell ({expected})")]
    RowWidth {
        slot: usize,
        got: usize,
        expected: usize,
    },
    #[error("{got} columns for {expected} cells")]
    ColumnCount { got: usize, expected: usize },
    #[error("{got} event tags for {expected} slots")]
    EventCount { got: usize, expected: usize },
    #[error("slot duration must be positive and finite, got {0}")]
    SlotDuration(f64),
    #[error("invalid mobility spec: {0}")]
    Mobility(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl TraceError {
    fn parse(line: u64, message: impl Into<String>) -> Self {
        TraceError::Parse {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEvent {
    #[default]
    None,
    SessionStart,
    Stall,
    HoAttempt,
    HoSuccess,
}

impl TraceEvent {
    pub const ALL: [TraceEvent; 5] = [
        TraceEvent::None,
        TraceEvent::SessionStart,
        TraceEvent::Stall,
        TraceEvent::HoAttempt,
        TraceEvent::HoSuccess,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TraceEvent::None => "none",
            TraceEvent::SessionStart => "session_start",
            TraceEvent::Stall => "stall",
            TraceEvent::HoAttempt => "ho_attempt",
            TraceEvent::HoSuccess => "ho_success",
        }
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TraceEvent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TraceEvent::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| format!("unknown event tag {s:?}"))
    }
}

/// Per-slot RSRP for a primary cell and its neighbours.
#[derive(Debug, Clone, PartialEq)]
pub struct RsrpTrace {
    pub start_time: f64,
    /// Seconds per slot.
    pub slot_duration: f64,
    /// Cell ids, primary first.
    pub cells: Vec<String>,
    /// `rows[slot][cell]` in dBm, always inside `[RSRP_MIN_DBM, RSRP_MAX_DBM]`.
    rows: Vec<Vec<f64>>,
    pub events: Vec<TraceEvent>,
    /// Number of samples pulled back into range on construction.
    pub clamped: usize,
}

fn clamp_rsrp(v: f64, clamped: &mut usize) -> f64 {
    if v < RSRP_MIN_DBM {
        *clamped += 1;
        RSRP_MIN_DBM
    } else if v > RSRP_MAX_DBM {
        *clamped += 1;
        RSRP_MAX_DBM
    } else {
        v
    }
}

impl RsrpTrace {
    /// Builds a trace from per-slot rows, clamping RSRP into range. Missing
    /// events default to `none`.
    pub fn from_rows(
        slot_duration: f64,
        cells: Vec<String>,
        rows: Vec<Vec<f64>>,
        events: Option<Vec<TraceEvent>>,
    ) -> Result<Self, TraceError> {
        if !(slot_duration.is_finite() && slot_duration > 0.0) {
            return Err(TraceError::SlotDuration(slot_duration));
        }
        if cells.is_empty() {
            return Err(TraceError::NoCells);
        }
        let mut clamped = 0;
        let mut checked = Vec::with_capacity(rows.len());
        for (slot, row) in rows.into_iter().enumerate() {
            if row.len() != cells.len() {
                return Err(TraceError::RowWidth {
                    slot,
                    got: row.len(),
                    expected: cells.len(),
                });
            }
            checked.push(row.into_iter().map(|v| clamp_rsrp(v, &mut clamped)).collect());
        }
        let events = events.unwrap_or_else(|| vec![TraceEvent::None; checked.len()]);
        if events.len() != checked.len() {
            return Err(TraceError::EventCount {
                got: events.len(),
                expected: checked.len(),
            });
        }
        Ok(Self {
            start_time: 0.0,
            slot_duration,
            cells,
            rows: checked,
            events,
            clamped,
        })
    }

    /// Builds a trace from per-cell columns.
    pub fn from_columns(
        slot_duration: f64,
        cells: Vec<String>,
        columns: Vec<Vec<f64>>,
    ) -> Result<Self, TraceError> {
        if columns.len() != cells.len() {
            return Err(TraceError::ColumnCount {
                got: columns.len(),
                expected: cells.len(),
            });
        }
        let len = columns.first().map_or(0, Vec::len);
        if let Some((cell, col)) = columns.iter().enumerate().find(|(_, c)| c.len() != len) {
            return Err(TraceError::Ragged {
                cell,
                got: col.len(),
                expected: len,
            });
        }
        let rows = (0..len)
            .map(|t| columns.iter().map(|c| c[t]).collect())
            .collect();
        Self::from_rows(slot_duration, cells, rows, None)
    }

    /// Default cell names: `pcell`, `scell1`, `scell2`, ...
    pub fn default_cell_names(n: usize) -> Vec<String> {
        (0..n)
            .map(|i| {
                if i == 0 {
                    "pcell".to_string()
                } else {
                    format!("scell{i}")
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn row(&self, slot: usize) -> &[f64] {
        &self.rows[slot]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, cell: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[cell]).collect()
    }

    pub fn cell_index(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c == name)
    }

    pub fn time_of(&self, slot: usize) -> f64 {
        self.start_time + slot as f64 * self.slot_duration
    }
}

/// Geometry and propagation parameters for synthetic traces.
///
/// Base stations sit on a line; the UE starts at `ue_start` and moves along
/// the line at `ue_speed`, reversing direction at either end of
/// `[ue_start, ue_start + route_length]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MobilitySpec {
    pub bs_positions: Vec<f64>,
    pub ue_start: f64,
    pub ue_speed: f64,
    pub route_length: f64,
    pub tx_power_at_ref: f64,
    pub ref_distance: f64,
    pub pathloss_exponent: f64,
    pub shadowing_sigma: f64,
    pub shadowing_correlation: f64,
    pub slot_duration: f64,
    #[serde(skip)]
    pub seed: u64,
}

impl Default for MobilitySpec {
    fn default() -> Self {
        Self {
            bs_positions: vec![0.0, 220.0, 400.0],
            ue_start: 120.0,
            ue_speed: 20.0,
            route_length: 270.0,
            tx_power_at_ref: -60.0,
            ref_distance: 50.0,
            pathloss_exponent: 3.5,
            shadowing_sigma: 4.0,
            shadowing_correlation: 0.9,
            slot_duration: 1.0,
            seed: 0,
        }
    }
}

impl MobilitySpec {
    pub fn validate(&self) -> Result<(), TraceError> {
        let fail = |m: String| Err(TraceError::Mobility(m));
        if self.bs_positions.is_empty() {
            return fail("need at least one base station".into());
        }
        if self.bs_positions.iter().any(|p| !p.is_finite()) {
            return fail("base station positions must be finite".into());
        }
        if !self.ue_start.is_finite() {
            return fail(format!("ue_start must be finite, got {}", self.ue_start));
        }
        if !(self.ue_speed > 0.0 && self.ue_speed.is_finite()) {
            return fail(format!("ue_speed must be positive, got {}", self.ue_speed));
        }
        if !(self.route_length > 0.0 && self.route_length.is_finite()) {
            return fail(format!(
                "route_length must be positive, got {}",
                self.route_length
            ));
        }
        if !(self.pathloss_exponent > 0.0) {
            return fail(format!(
                "pathloss_exponent must be positive, got {}",
                self.pathloss_exponent
            ));
        }
        if !(self.ref_distance > 0.0) {
            return fail(format!(
                "ref_distance must be positive, got {}",
                self.ref_distance
            ));
        }
        if !(self.shadowing_sigma >= 0.0) {
            return fail(format!(
                "shadowing_sigma must be non-negative, got {}",
                self.shadowing_sigma
            ));
        }
        if !(0.0..1.0).contains(&self.shadowing_correlation) {
            return fail(format!(
                "shadowing_correlation must be in [0, 1), got {}",
                self.shadowing_correlation
            ));
        }
        if !(self.slot_duration > 0.0 && self.slot_duration.is_finite()) {
            return fail(format!(
                "slot_duration must be positive, got {}",
                self.slot_duration
            ));
        }
        Ok(())
    }

    /// UE position at `slot`, folding the travelled distance back and forth
    /// over the route.
    pub fn ue_position(&self, slot: usize) -> f64 {
        let travelled = self.ue_speed * self.slot_duration * slot as f64;
        let period = 2.0 * self.route_length;
        let phase = travelled % period;
        let offset = if phase <= self.route_length {
            phase
        } else {
            period - phase
        };
        self.ue_start + offset
    }

    /// Log-distance path loss without shadowing. Distances below the
    /// reference distance are floored to it.
    pub fn mean_rsrp(&self, distance: f64) -> f64 {
        let d = distance.abs().max(self.ref_distance);
        self.tx_power_at_ref - 10.0 * self.pathloss_exponent * (d / self.ref_distance).log10()
    }
}

/// Synthesizes a trace with log-distance path loss and AR(1) shadowing,
/// independent per cell.
pub fn generate_trace(spec: &MobilitySpec, horizon: usize) -> Result<RsrpTrace, TraceError> {
    spec.validate()?;
    if horizon == 0 {
        return Err(TraceError::Mobility("horizon must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let rho = spec.shadowing_correlation;
    let innovation = spec.shadowing_sigma * (1.0 - rho * rho).sqrt();
    let cells = spec.bs_positions.len();
    let mut shadow = vec![0.0; cells];
    let mut rows = Vec::with_capacity(horizon);
    for slot in 0..horizon {
        let x = spec.ue_position(slot);
        let row = spec
            .bs_positions
            .iter()
            .zip(shadow.iter_mut())
            .map(|(&bs, s)| {
                let w: f64 = StandardNormal.sample(&mut rng);
                *s = if slot == 0 {
                    spec.shadowing_sigma * w
                } else {
                    rho * *s + innovation * w
                };
                spec.mean_rsrp(x - bs) + *s
            })
            .collect();
        rows.push(row);
    }
    let mut events = vec![TraceEvent::None; horizon];
    events[0] = TraceEvent::SessionStart;
    let mut trace = RsrpTrace::from_rows(
        spec.slot_duration,
        RsrpTrace::default_cell_names(cells),
        rows,
        Some(events),
    )?;
    trace.start_time = 0.0;
    Ok(trace)
}

/// Parses a trace CSV, clamping RSRP into range.
pub fn load_trace_csv<R: Read>(source: R) -> Result<RsrpTrace, TraceError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(source);
    let mut records = reader.records();

    let header = match records.next() {
        Some(rec) => rec?,
        None => return Err(TraceError::parse(1, "missing header")),
    };
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names.first() != Some(&"t") || names.last() != Some(&"event") {
        return Err(TraceError::parse(
            1,
            "missing header: expected `t,<cells...>,event`",
        ));
    }
    if names.len() < 3 {
        return Err(TraceError::parse(1, "header names no cell columns"));
    }
    let cells: Vec<String> = names[1..names.len() - 1]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let width = names.len();

    let mut times = Vec::new();
    let mut rows = Vec::new();
    let mut events = Vec::new();
    let mut clamped = 0;
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != width {
            return Err(TraceError::parse(
                line,
                format!("expected {width} fields, found {}", rec.len()),
            ));
        }
        let number = |i: usize| -> Result<f64, TraceError> {
            let field = rec[i].trim();
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    TraceError::parse(
                        line,
                        format!("column {:?}: non-numeric value {field:?}", names[i]),
                    )
                })
        };
        times.push((line, number(0)?));
        let row = (1..width - 1)
            .map(|i| number(i).map(|v| clamp_rsrp(v, &mut clamped)))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
        let tag = rec[width - 1].trim();
        events.push(
            tag.parse::<TraceEvent>()
                .map_err(|m| TraceError::parse(line, m))?,
        );
    }

    let start_time = times.first().map_or(0.0, |&(_, t)| t);
    let slot_duration = if times.len() >= 2 {
        times[1].1 - times[0].1
    } else {
        1.0
    };
    if !(slot_duration > 0.0) {
        let line = times.get(1).map_or(2, |&(l, _)| l);
        return Err(TraceError::parse(line, "time column must be increasing"));
    }
    for (i, &(line, t)) in times.iter().enumerate() {
        let expected = start_time + i as f64 * slot_duration;
        if (t - expected).abs() > STEP_TOLERANCE * slot_duration.max(1.0) {
            return Err(TraceError::parse(
                line,
                format!("time {t} breaks the fixed step of {slot_duration} s"),
            ));
        }
    }

    Ok(RsrpTrace {
        start_time,
        slot_duration,
        cells,
        rows,
        events,
        clamped,
    })
}

/// Writes a trace in the CSV layout read by [`load_trace_csv`]. Values use
/// the shortest representation that parses back to the same `f64`.
pub fn save_trace_csv<W: Write>(trace: &RsrpTrace, sink: W) -> Result<(), TraceError> {
    let mut writer = csv::WriterBuilder::new().from_writer(sink);
    let mut header = vec!["t".to_string()];
    header.extend(trace.cells.iter().cloned());
    header.push("event".to_string());
    writer.write_record(&header)?;
    for (slot, row) in trace.rows.iter().enumerate() {
        let mut record = Vec::with_capacity(row.len() + 2);
        record.push(trace.time_of(slot).to_string());
        record.extend(row.iter().map(f64::to_string));
        record.push(trace.events[slot].to_string());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "t,pcell,scell1,scell2,event\n\
                           0,-80.5,-95,-101,session_start\n\
                           1,-81,-30,-100.25,none\n\
                           2,-82,-92,-99,ho_success\n";

    #[test]
    fn loads_fixture() {
        let trace = load_trace_csv(FIXTURE.as_bytes()).unwrap();
        assert_eq!(trace.len(), 3);
        assert_eq!(trace.cells, vec!["pcell", "scell1", "scell2"]);
        assert_eq!(trace.slot_duration, 1.0);
        assert_eq!(trace.row(0), &[-80.5, -95.0, -101.0]);
        assert_eq!(trace.row(1)[1], -44.0);
        assert_eq!(trace.clamped, 1);
        assert_eq!(trace.events[2], TraceEvent::HoSuccess);
        assert_eq!(trace.events[0], TraceEvent::SessionStart);
    }

    fn parse_err(text: &str) -> (u64, String) {
        match load_trace_csv(text.as_bytes()) {
            Err(TraceError::Parse { line, message }) => (line, message),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reports_errors_with_line_numbers() {
        let (line, msg) = parse_err("");
        assert_eq!(line, 1);
        assert!(msg.contains("missing header"));
        let (line, _) = parse_err("0,-80,none\n");
        assert_eq!(line, 1);
        let (line, msg) = parse_err("t,pcell,event\n0,-80,none\n1,abc,none\n");
        assert_eq!(line, 3);
        assert!(msg.contains("non-numeric"));
        let (line, msg) = parse_err("t,pcell,event\n0,-80,none\n1,-81,handover\n");
        assert_eq!(line, 3);
        assert!(msg.contains("unknown event"));
        let (line, msg) = parse_err("t,pcell,scell1,event\n0,-80,-90,none\n1,-81,none\n");
        assert_eq!(line, 3);
        assert!(msg.contains("expected 4 fields"));
        let (line, _) = parse_err("t,pcell,event\n0,-80,none\n1,-81,none\n3,-81,none\n");
        assert_eq!(line, 4);
    }

    #[test]
    fn save_then_load_is_identity() {
        let trace = RsrpTrace::from_rows(
            0.5,
            RsrpTrace::default_cell_names(2),
            vec![vec![-90.125, -100.0], vec![-91.0, -99.5], vec![-140.0, -44.0]],
            Some(vec![
                TraceEvent::SessionStart,
                TraceEvent::Stall,
                TraceEvent::HoAttempt,
            ]),
        )
        .unwrap();
        let mut buf = Vec::new();
        save_trace_csv(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,pcell,scell1,event\n0,-90.125,-100,session_start\n"));
        assert_eq!(load_trace_csv(buf.as_slice()).unwrap(), trace);
    }

    #[test]
    fn reference_distance_gives_reference_power() {
        let spec = MobilitySpec {
            bs_positions: vec![0.0],
            ue_start: 50.0,
            shadowing_sigma: 0.0,
            ..MobilitySpec::default()
        };
        let trace = generate_trace(&spec, 1).unwrap();
        assert_eq!(trace.row(0)[0], spec.tx_power_at_ref);
        assert_eq!(spec.mean_rsrp(0.0), spec.tx_power_at_ref);
    }

    #[test]
    fn moving_away_without_shadowing_is_nonincreasing() {
        let spec = MobilitySpec {
            bs_positions: vec![0.0, -100.0],
            ue_start: 0.0,
            ue_speed: 15.0,
            route_length: 2000.0,
            shadowing_sigma: 0.0,
            ..MobilitySpec::default()
        };
        let trace = generate_trace(&spec, 100).unwrap();
        for cell in 0..2 {
            let col = trace.column(cell);
            assert!(col.windows(2).all(|w| w[1] <= w[0]));
        }
        assert!(trace.column(0)[99] < trace.column(0)[10]);
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let spec = MobilitySpec {
            seed: 42,
            ..MobilitySpec::default()
        };
        let a = generate_trace(&spec, 60).unwrap();
        let b = generate_trace(&spec, 60).unwrap();
        assert_eq!(a, b);
        let c = generate_trace(&MobilitySpec { seed: 43, ..spec }, 60).unwrap();
        assert_ne!(a, c);
        assert!(a
            .rows()
            .iter()
            .flatten()
            .all(|v| (RSRP_MIN_DBM..=RSRP_MAX_DBM).contains(v)));
    }

    #[test]
    fn route_folds_back() {
        let spec = MobilitySpec {
            ue_start: 10.0,
            ue_speed: 10.0,
            route_length: 100.0,
            ..MobilitySpec::default()
        };
        assert_eq!(spec.ue_position(0), 10.0);
        assert_eq!(spec.ue_position(10), 110.0);
        assert_eq!(spec.ue_position(15), 60.0);
        assert_eq!(spec.ue_position(20), 10.0);
    }

    #[test]
    fn mobility_validation() {
        let ok = MobilitySpec::default();
        assert!(ok.validate().is_ok());
        for bad in [
            MobilitySpec {
                ue_speed: 0.0,
                ..ok.clone()
            },
            MobilitySpec {
                pathloss_exponent: 0.0,
                ..ok.clone()
            },
            MobilitySpec {
                shadowing_sigma: -1.0,
                ..ok.clone()
            },
            MobilitySpec {
                shadowing_correlation: 1.0,
                ..ok.clone()
            },
            MobilitySpec {
                bs_positions: vec![],
                ..ok.clone()
            },
        ] {
            assert!(matches!(bad.validate(), Err(TraceError::Mobility(_))));
        }
    }
}
