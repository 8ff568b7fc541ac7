//! Measurement codecs and cumulative-bit accounting.
//!
//! Samples are quantized as `round((rsrp + 140) / step)` into a fixed-width
//! field. The raw codec sends every quantized sample; the delta codec sends
//! the first slot raw and then, per cell, the Elias-gamma code of
//! `zigzag(q_t - q_{t-1}) + 1`. Streams are packed MSB first and zero-padded
//! to a whole byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{unzigzag, zigzag, BitReader, BitWriter, OutOfBits};
use crate::infotheory::{te_from_slices, InfoError, SymbolSeries, TeConfig};
use crate::scenario::{RsrpTrace, RSRP_MAX_DBM, RSRP_MIN_DBM};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error("invalid codec spec: {0}")]
    InvalidSpec(String),
    #[error("slot {slot}, cell {cell}: quantized level {level} does not fit in {width} bits")]
    Overflow {
        slot: usize,
        cell: usize,
        level: i64,
        width: u32,
    },
    #[error("log was produced by the {log:?} codec, not {spec:?}")]
    KindMismatch { log: CodecKind, spec: CodecKind },
    #[error("bitstream truncated at bit {offset}")]
    Truncated { offset: u64 },
    #[error("invalid bitstream at bit {offset}: {reason}")]
    Invalid { offset: u64, reason: String },
}

impl From<OutOfBits> for CodecError {
    fn from(e: OutOfBits) -> Self {
        CodecError::Truncated { offset: e.offset }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodecKind {
    #[default]
    Raw,
    Delta,
}

/// Uniform quantizer anchored at the RSRP floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Quantizer {
    pub bits_per_sample: u32,
    /// dB per level
    pub step_db: f64,
}

impl Default for Quantizer {
    fn default() -> Self {
        Self {
            bits_per_sample: 8,
            step_db: 1.0,
        }
    }
}

impl Quantizer {
    pub fn validate(&self) -> Result<(), CodecError> {
        if !(1..=32).contains(&self.bits_per_sample) {
            return Err(CodecError::InvalidSpec(format!(
                "bits_per_sample must be in 1..=32, got {}",
                self.bits_per_sample
            )));
        }
        if !(self.step_db > 0.0 && self.step_db.is_finite()) {
            return Err(CodecError::InvalidSpec(format!(
                "step_db must be positive, got {}",
                self.step_db
            )));
        }
        Ok(())
    }

    pub fn max_level(&self) -> u64 {
        (1u64 << self.bits_per_sample) - 1
    }

    /// Highest level any in-range RSRP can produce.
    pub fn span_levels(&self) -> i64 {
        ((RSRP_MAX_DBM - RSRP_MIN_DBM) / self.step_db).round() as i64
    }

    /// True when every RSRP in the clamped range fits the field.
    pub fn covers_rsrp_range(&self) -> bool {
        self.span_levels() as u64 <= self.max_level()
    }

    pub fn level(&self, rsrp: f64) -> i64 {
        ((rsrp - RSRP_MIN_DBM) / self.step_db).round() as i64
    }

    pub fn dequantize(&self, level: u64) -> f64 {
        RSRP_MIN_DBM + level as f64 * self.step_db
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CodecSpec {
    pub kind: CodecKind,
    #[serde(flatten)]
    pub quantizer: Quantizer,
}

impl CodecSpec {
    pub fn raw(bits_per_sample: u32, step_db: f64) -> Self {
        Self {
            kind: CodecKind::Raw,
            quantizer: Quantizer {
                bits_per_sample,
                step_db,
            },
        }
    }

    pub fn delta(bits_per_sample: u32, step_db: f64) -> Self {
        Self {
            kind: CodecKind::Delta,
            ..Self::raw(bits_per_sample, step_db)
        }
    }
}

/// Quantizes every sample; `rows[slot][cell]`.
pub fn quantize_trace(trace: &RsrpTrace, q: &Quantizer) -> Result<Vec<Vec<u64>>, CodecError> {
    q.validate()?;
    trace
        .rows()
        .iter()
        .enumerate()
        .map(|(slot, row)| quantize_row(row, q, slot))
        .collect()
}

pub fn quantize_row(row: &[f64], q: &Quantizer, slot: usize) -> Result<Vec<u64>, CodecError> {
    row.iter()
        .enumerate()
        .map(|(cell, &v)| {
            let level = q.level(v);
            if level < 0 || level as u64 > q.max_level() {
                Err(CodecError::Overflow {
                    slot,
                    cell,
                    level,
                    width: q.bits_per_sample,
                })
            } else {
                Ok(level as u64)
            }
        })
        .collect()
}

pub fn write_raw(w: &mut BitWriter, levels: &[u64], q: &Quantizer) {
    for &level in levels {
        w.write_bits(level, q.bits_per_sample);
    }
}

pub fn write_delta(w: &mut BitWriter, prev: &[u64], cur: &[u64]) {
    for (&p, &c) in prev.iter().zip(cur) {
        w.write_gamma(zigzag(c as i64 - p as i64) + 1);
    }
}

pub fn read_raw(r: &mut BitReader<'_>, cells: usize, q: &Quantizer) -> Result<Vec<u64>, CodecError> {
    (0..cells)
        .map(|_| r.read_bits(q.bits_per_sample).map_err(CodecError::from))
        .collect()
}

/// Applies one delta payload to `prev`; rejects levels outside the field.
pub fn read_delta(
    r: &mut BitReader<'_>,
    prev: &[u64],
    q: &Quantizer,
) -> Result<Vec<u64>, CodecError> {
    prev.iter()
        .map(|&p| {
            let offset = r.position();
            let code = r.read_gamma()?;
            let level = p as i64 + unzigzag(code - 1);
            if level < 0 || level as u64 > q.max_level() {
                return Err(CodecError::Invalid {
                    offset,
                    reason: format!("delta leaves the quantizer range (level {level})"),
                });
            }
            Ok(level as u64)
        })
        .collect()
}

/// Encoded stream plus per-slot bit accounting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageLog {
    pub kind: CodecKind,
    pub cells: usize,
    /// Payload length of each slot.
    pub slot_bits: Vec<u64>,
    pub cumulative_bits: Vec<u64>,
    /// All payloads back to back, MSB first.
    pub bytes: Vec<u8>,
    /// Zero bits appended to fill the last byte.
    pub padding_bits: u8,
}

impl MessageLog {
    fn from_writer(kind: CodecKind, cells: usize, slot_bits: Vec<u64>, w: BitWriter) -> Self {
        let cumulative_bits = slot_bits
            .iter()
            .scan(0u64, |acc, &b| {
                *acc += b;
                Some(*acc)
            })
            .collect();
        let (bytes, padding_bits) = w.finish();
        Self {
            kind,
            cells,
            slot_bits,
            cumulative_bits,
            bytes,
            padding_bits,
        }
    }

    pub fn total_bits(&self) -> u64 {
        self.cumulative_bits.last().copied().unwrap_or(0)
    }

    pub fn slots(&self) -> usize {
        self.slot_bits.len()
    }

    /// Payload of one slot as a `0`/`1` string.
    pub fn payload(&self, slot: usize) -> String {
        let start = self.cumulative_bits[slot] - self.slot_bits[slot];
        let mut r = BitReader::new(&self.bytes, self.total_bits());
        (0..start).for_each(|_| {
            r.read_bit().expect("in range");
        });
        (0..self.slot_bits[slot])
            .map(|_| if r.read_bit().expect("in range") { '1' } else { '0' })
            .collect()
    }
}

pub fn encode(trace: &RsrpTrace, spec: &CodecSpec) -> Result<MessageLog, CodecError> {
    match spec.kind {
        CodecKind::Raw => encode_raw(trace, spec),
        CodecKind::Delta => encode_delta(trace, spec),
    }
}

pub fn encode_raw(trace: &RsrpTrace, spec: &CodecSpec) -> Result<MessageLog, CodecError> {
    let q = &spec.quantizer;
    let levels = quantize_trace(trace, q)?;
    let mut w = BitWriter::new();
    let mut slot_bits = Vec::with_capacity(levels.len());
    for row in &levels {
        let before = w.len();
        write_raw(&mut w, row, q);
        slot_bits.push(w.len() - before);
    }
    Ok(MessageLog::from_writer(
        CodecKind::Raw,
        trace.num_cells(),
        slot_bits,
        w,
    ))
}

pub fn encode_delta(trace: &RsrpTrace, spec: &CodecSpec) -> Result<MessageLog, CodecError> {
    let q = &spec.quantizer;
    let levels = quantize_trace(trace, q)?;
    let mut w = BitWriter::new();
    let mut slot_bits = Vec::with_capacity(levels.len());
    let mut prev: Option<&Vec<u64>> = None;
    for row in &levels {
        let before = w.len();
        match prev {
            None => write_raw(&mut w, row, q),
            Some(p) => write_delta(&mut w, p, row),
        }
        slot_bits.push(w.len() - before);
        prev = Some(row);
    }
    Ok(MessageLog::from_writer(
        CodecKind::Delta,
        trace.num_cells(),
        slot_bits,
        w,
    ))
}

/// Reconstructs the quantized samples, `rows[slot][cell]`.
pub fn decode(log: &MessageLog, spec: &CodecSpec) -> Result<Vec<Vec<u64>>, CodecError> {
    if log.kind != spec.kind {
        return Err(CodecError::KindMismatch {
            log: log.kind,
            spec: spec.kind,
        });
    }
    let q = &spec.quantizer;
    q.validate()?;
    let payload_bits = (log.bytes.len() as u64 * 8).saturating_sub(u64::from(log.padding_bits));
    let mut r = BitReader::new(&log.bytes, payload_bits);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(log.slots());
    for _ in 0..log.slots() {
        let row = match (spec.kind, rows.last()) {
            (CodecKind::Delta, Some(prev)) => read_delta(&mut r, prev, q)?,
            _ => read_raw(&mut r, log.cells, q)?,
        };
        rows.push(row);
    }
    if r.remaining() != 0 {
        return Err(CodecError::Invalid {
            offset: r.position(),
            reason: format!("{} unread bits after the last slot", r.remaining()),
        });
    }
    Ok(rows)
}

/// Cumulative transfer-entropy bound, one value per slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeBound {
    /// Running sum of local TE with negative terms clipped to 0.
    pub cumulative: Vec<f64>,
    /// Running sum without clipping.
    pub unclipped: Vec<f64>,
    pub global_bits: f64,
}

impl TeBound {
    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

pub fn te_bound_bits(
    source: &SymbolSeries,
    actions: &SymbolSeries,
    cfg: &TeConfig,
) -> Result<TeBound, InfoError> {
    let est = te_from_slices(source.symbols(), actions.symbols(), cfg)?;
    let local = est.local_per_slot(actions.len());
    let running = |clip: bool| {
        local
            .iter()
            .scan(0.0, |acc, &v| {
                *acc += if clip { v.max(0.0) } else { v };
                Some(*acc)
            })
            .collect()
    };
    Ok(TeBound {
        cumulative: running(true),
        unclipped: running(false),
        global_bits: est.global_bits,
    })
}
