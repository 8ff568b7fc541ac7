//! Slot-by-slot effective-communication loop.
//!
//! Each slot the sender picks a payload using its surrogate of the receiver,
//! the channel drops or delays it, the receiver decodes into its knowledge
//! state and runs handover logic on what it knows, and viability is scored
//! against a full-information reference receiver. Finally the sender folds
//! the observed receiver action back into its surrogate.
//!
//! Viability per slot is `-log2(min(stale + 1, candidates))`, where `stale`
//! counts consecutive slots in which the receiver's knowledge differs from
//! the surrogate's. Once the receiver's serving cell has disagreed with the
//! reference for more than `grace_slots` consecutive slots the call is
//! dropped and viability stays at `drop_penalty` for the rest of the run.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitReader, BitWriter};
use crate::encoding::{
    encode_delta, encode_raw, quantize_trace, read_delta, read_raw, te_bound_bits, write_delta,
    write_raw, CodecError, CodecKind, CodecSpec, Quantizer,
};
use crate::handover::{
    serving_margin, to_symbols, Action, ActionSeries, HandoverDecider, HandoverEvent,
    HandoverParams,
};
use crate::infotheory::{
    discretize, te_from_slices, windowed_te_from_slices, BinningSpec, InfoError, TeConfig,
    WindowedTe,
};
use crate::scenario::{generate_trace, MobilitySpec, RsrpTrace, TraceError};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Info(#[from] InfoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelSpec {
    pub loss_probability: f64,
    /// Slots between sending and delivery.
    pub delay: usize,
    /// Loss-draw seed; derived from the run seed when absent.
    pub seed: Option<u64>,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self {
            loss_probability: 0.0,
            delay: 0,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    #[default]
    AlwaysRaw,
    AlwaysDelta,
    /// Raw sample whenever some cell moved by at least the threshold since
    /// the last sample the surrogate believes was delivered, or when the
    /// observed receiver action disagrees with the surrogate's prediction.
    EventTriggered,
    /// Never sends; baseline for the uninformed receiver.
    Silent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SenderPolicy {
    pub kind: PolicyKind,
    /// dB
    pub trigger_threshold: f64,
}

impl Default for SenderPolicy {
    fn default() -> Self {
        Self {
            kind: PolicyKind::AlwaysRaw,
            trigger_threshold: 3.0,
        }
    }
}

impl SenderPolicy {
    pub fn of(kind: PolicyKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ViabilityParams {
    pub candidate_instants: usize,
    pub drop_penalty: f64,
    /// Consecutive slots on the wrong serving cell tolerated before the call
    /// drops.
    pub grace_slots: usize,
}

impl Default for ViabilityParams {
    fn default() -> Self {
        Self {
            candidate_instants: 4,
            drop_penalty: -100.0,
            grace_slots: 3,
        }
    }
}

/// How the handover-margin series is symbolized and analysed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TeSettings {
    #[serde(flatten)]
    pub config: TeConfig,
    pub margin_bins: BinningSpec,
    pub window: usize,
    pub step: usize,
}

impl Default for TeSettings {
    fn default() -> Self {
        Self {
            config: TeConfig::default(),
            margin_bins: BinningSpec {
                lo: -12.0,
                hi: 12.0,
                bins: 4,
            },
            window: 10,
            step: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub horizon: usize,
    pub seed: u64,
    pub mobility: MobilitySpec,
    pub handover: HandoverParams,
    pub quantizer: Quantizer,
    pub channel: ChannelSpec,
    pub policy: SenderPolicy,
    pub viability: ViabilityParams,
    pub te: TeSettings,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            horizon: 60,
            seed: 1,
            mobility: MobilitySpec::default(),
            handover: HandoverParams::default(),
            quantizer: Quantizer::default(),
            channel: ChannelSpec::default(),
            policy: SenderPolicy::default(),
            viability: ViabilityParams::default(),
            te: TeSettings::default(),
        }
    }
}

impl SimConfig {
    /// Cross-field checks run before any slot is simulated.
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::Config(m));
        self.mobility.validate()?;
        self.handover.validate().map_err(SimError::Config)?;
        self.quantizer.validate()?;
        if !self.quantizer.covers_rsrp_range() {
            return bad(format!(
                "{} bits at {} dB/level cannot hold the {}-level RSRP range",
                self.quantizer.bits_per_sample,
                self.quantizer.step_db,
                self.quantizer.span_levels() + 1
            ));
        }
        if !(0.0..=1.0).contains(&self.channel.loss_probability) {
            return bad(format!(
                "loss_probability must be in [0, 1], got {}",
                self.channel.loss_probability
            ));
        }
        if self.policy.kind == PolicyKind::EventTriggered && !(self.policy.trigger_threshold > 0.0)
        {
            return bad(format!(
                "trigger_threshold must be positive, got {}",
                self.policy.trigger_threshold
            ));
        }
        let v = &self.viability;
        if v.candidate_instants < 2 {
            return bad("candidate_instants must be at least 2".into());
        }
        if !(v.drop_penalty < -(v.candidate_instants as f64).log2()) {
            return bad(format!(
                "drop_penalty {} must be below -log2({})",
                v.drop_penalty, v.candidate_instants
            ));
        }
        self.te.config.validate()?;
        self.te.margin_bins.validate()?;
        if self.te.window < self.te.config.min_len() {
            return Err(InfoError::WindowTooSmall {
                window: self.te.window,
                min: self.te.config.min_len(),
            }
            .into());
        }
        if self.te.step == 0 {
            return Err(InfoError::ZeroStep.into());
        }
        if self.horizon < self.te.config.min_len() {
            return bad(format!(
                "horizon {} is shorter than the {} slots transfer entropy needs",
                self.horizon,
                self.te.config.min_len()
            ));
        }
        Ok(())
    }

    pub fn mobility_with_seed(&self) -> MobilitySpec {
        MobilitySpec {
            seed: self.seed,
            ..self.mobility.clone()
        }
    }

    pub fn channel_seed(&self) -> u64 {
        self.channel
            .seed
            .unwrap_or(self.seed ^ 0x9e37_79b9_7f4a_7c15)
    }
}

/// What a node knows about the measurement stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeState {
    pub last_decoded: Option<Vec<u64>>,
    pub quantizer: Quantizer,
    pub updates_seen: u64,
}

impl KnowledgeState {
    pub fn new(quantizer: Quantizer) -> Self {
        Self {
            last_decoded: None,
            quantizer,
            updates_seen: 0,
        }
    }

    fn dequantized(&self) -> Option<Vec<f64>> {
        self.last_decoded
            .as_ref()
            .map(|row| row.iter().map(|&l| self.quantizer.dequantize(l)).collect())
    }
}

/// The sender's model of the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateState {
    pub knowledge: KnowledgeState,
    pub last_observed_action: Action,
    /// Serving cell implied by the observed receiver actions.
    pub receiver_serving: usize,
    decider: HandoverDecider,
}

#[derive(Debug, Clone, PartialEq)]
struct Message {
    kind: CodecKind,
    bytes: Vec<u8>,
    bits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub slot: usize,
    pub sent: Option<CodecKind>,
    pub sent_bits: u64,
    pub lost: bool,
    pub delivered: usize,
    pub decode_errors: usize,
    pub receiver_action: Action,
    pub reference_action: Action,
    pub in_sync: bool,
    pub stale_slots: usize,
    pub dropped: bool,
    pub viability: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub clamped: usize,
    pub messages_sent: usize,
    pub messages_lost: usize,
    pub messages_delivered: usize,
    pub decode_errors: usize,
    pub stale_slots: usize,
}

/// A single run, advanced one slot at a time with [`Simulation::step`].
pub struct Simulation {
    config: SimConfig,
    levels: Vec<Vec<u64>>,
    cells: usize,
    slot: usize,
    rng: ChaCha8Rng,
    in_flight: VecDeque<(usize, Message)>,
    receiver: KnowledgeState,
    receiver_decider: HandoverDecider,
    reference_decider: HandoverDecider,
    surrogate: SurrogateState,
    force_send: bool,
    stale_run: usize,
    mismatch_run: usize,
    drop_slot: Option<usize>,
    counters: Counters,
}

impl Simulation {
    /// Prepares a run over the first `config.horizon` slots of `trace`.
    pub fn new(config: &SimConfig, trace: &RsrpTrace) -> Result<Self, SimError> {
        config.validate()?;
        if trace.len() < config.horizon {
            return Err(SimError::Config(format!(
                "trace has {} slots but the horizon is {}",
                trace.len(),
                config.horizon
            )));
        }
        let mut levels = quantize_trace(trace, &config.quantizer)?;
        levels.truncate(config.horizon);
        let cells = trace.num_cells();
        let decider = HandoverDecider::new(config.handover, cells, 0);
        Ok(Self {
            config: config.clone(),
            levels,
            cells,
            slot: 0,
            rng: ChaCha8Rng::seed_from_u64(config.channel_seed()),
            in_flight: VecDeque::new(),
            receiver: KnowledgeState::new(config.quantizer),
            receiver_decider: decider.clone(),
            reference_decider: decider.clone(),
            surrogate: SurrogateState {
                knowledge: KnowledgeState::new(config.quantizer),
                last_observed_action: Action::Stay,
                receiver_serving: 0,
                decider,
            },
            force_send: false,
            stale_run: 0,
            mismatch_run: 0,
            drop_slot: None,
            counters: Counters {
                clamped: trace.clamped,
                ..Counters::default()
            },
        })
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    pub fn is_done(&self) -> bool {
        self.slot >= self.levels.len()
    }

    pub fn receiver_knowledge(&self) -> &KnowledgeState {
        &self.receiver
    }

    pub fn surrogate(&self) -> &SurrogateState {
        &self.surrogate
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn receiver_serving(&self) -> usize {
        self.receiver_decider.serving()
    }

    fn select_message(&self, current: &[u64]) -> Option<Message> {
        let q = &self.config.quantizer;
        let known = self.surrogate.knowledge.last_decoded.as_deref();
        let kind = match (self.config.policy.kind, known) {
            (PolicyKind::Silent, _) => return None,
            (PolicyKind::AlwaysRaw, _) | (_, None) => CodecKind::Raw,
            (PolicyKind::AlwaysDelta, Some(_)) => CodecKind::Delta,
            (PolicyKind::EventTriggered, Some(prev)) => {
                let threshold = self.config.policy.trigger_threshold;
                let moved = prev
                    .iter()
                    .zip(current)
                    .any(|(&p, &c)| (c as f64 - p as f64).abs() * q.step_db >= threshold);
                if moved || self.force_send {
                    CodecKind::Raw
                } else {
                    return None;
                }
            }
        };
        let mut w = BitWriter::new();
        match kind {
            CodecKind::Raw => write_raw(&mut w, current, q),
            CodecKind::Delta => write_delta(&mut w, known.expect("delta needs a base"), current),
        }
        let bits = w.len();
        let (bytes, _) = w.finish();
        Some(Message { kind, bytes, bits })
    }

    fn decode_message(&self, msg: &Message) -> Result<Vec<u64>, CodecError> {
        let q = &self.config.quantizer;
        let mut r = BitReader::new(&msg.bytes, msg.bits);
        let values = match (msg.kind, self.receiver.last_decoded.as_deref()) {
            (CodecKind::Raw, _) => read_raw(&mut r, self.cells, q)?,
            (CodecKind::Delta, Some(prev)) => read_delta(&mut r, prev, q)?,
            (CodecKind::Delta, None) => {
                return Err(CodecError::Invalid {
                    offset: 0,
                    reason: "delta payload without a decoded base".into(),
                })
            }
        };
        if r.remaining() != 0 {
            return Err(CodecError::Invalid {
                offset: r.position(),
                reason: "payload longer than one sample".into(),
            });
        }
        Ok(values)
    }

    /// Advances one slot; `None` once the horizon is reached.
    pub fn step(&mut self) -> Option<SlotRecord> {
        if self.is_done() {
            return None;
        }
        let t = self.slot;
        let current = self.levels[t].clone();
        let q = self.config.quantizer;

        // sender
        let message = self.select_message(&current);
        let (sent, sent_bits) = match &message {
            Some(m) => (Some(m.kind), m.bits),
            None => (None, 0),
        };
        if message.is_some() {
            self.surrogate.knowledge.last_decoded = Some(current.clone());
            self.surrogate.knowledge.updates_seen += 1;
            self.force_send = false;
            self.counters.messages_sent += 1;
        }

        // channel
        let mut lost = false;
        if let Some(m) = message {
            let draw: f64 = self.rng.random();
            lost = draw < self.config.channel.loss_probability;
            if lost {
                self.counters.messages_lost += 1;
            } else {
                self.in_flight.push_back((t + self.config.channel.delay, m));
            }
        }

        // receiver
        let mut delivered = 0;
        let mut decode_errors = 0;
        while self.in_flight.front().is_some_and(|(due, _)| *due <= t) {
            let (_, m) = self.in_flight.pop_front().expect("front exists");
            match self.decode_message(&m) {
                Ok(values) => {
                    self.receiver.last_decoded = Some(values);
                    self.receiver.updates_seen += 1;
                    delivered += 1;
                }
                Err(_) => decode_errors += 1,
            }
        }
        self.counters.messages_delivered += delivered;
        self.counters.decode_errors += decode_errors;

        let receiver_action = match (self.drop_slot, self.receiver.dequantized()) {
            (None, Some(view)) => self.receiver_decider.step(&view),
            _ => Action::Stay,
        };
        let truth: Vec<f64> = current.iter().map(|&l| q.dequantize(l)).collect();
        let reference_action = self.reference_decider.step(&truth);

        // surrogate update from the observed action
        let predicted = match self.surrogate.knowledge.dequantized() {
            Some(view) => self.surrogate.decider.step(&view),
            None => Action::Stay,
        };
        self.surrogate.last_observed_action = receiver_action;
        if let Action::Handover(to) = receiver_action {
            self.surrogate.receiver_serving = to;
        }
        if predicted != receiver_action {
            self.force_send = true;
            self.surrogate.decider.reset(self.surrogate.receiver_serving);
        }

        // scoring
        let in_sync = self.receiver.last_decoded == self.surrogate.knowledge.last_decoded;
        self.stale_run = if in_sync { 0 } else { self.stale_run + 1 };
        if !in_sync {
            self.counters.stale_slots += 1;
        }
        if self.receiver_decider.serving() != self.reference_decider.serving() {
            self.mismatch_run += 1;
        } else {
            self.mismatch_run = 0;
        }
        if self.drop_slot.is_none() && self.mismatch_run > self.config.viability.grace_slots {
            self.drop_slot = Some(t);
        }
        let dropped = self.drop_slot.is_some();
        let viability = if dropped {
            self.config.viability.drop_penalty
        } else {
            let candidates = (self.stale_run + 1).min(self.config.viability.candidate_instants);
            0.0 - (candidates as f64).log2()
        };

        self.slot += 1;
        Some(SlotRecord {
            slot: t,
            sent,
            sent_bits,
            lost,
            delivered,
            decode_errors,
            receiver_action,
            reference_action,
            in_sync,
            stale_slots: self.stale_run,
            dropped,
            viability,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitSeries {
    /// What the configured policy actually sent.
    pub policy: Vec<u64>,
    /// Raw codec over every slot.
    pub raw: Vec<u64>,
    /// Delta codec over every slot.
    pub delta: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeReport {
    pub global_bits: f64,
    pub bias_corrected_bits: Option<f64>,
    /// Cumulative local TE, negatives clipped.
    pub bound: Vec<f64>,
    pub bound_unclipped: Vec<f64>,
    pub windowed: Vec<WindowedTe>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandoverReport {
    pub receiver: Vec<HandoverEvent>,
    pub reference: Vec<HandoverEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub seed: u64,
    pub horizon: usize,
    pub config: SimConfig,
    pub viability: Vec<f64>,
    pub final_viability: f64,
    pub drop_slot: Option<usize>,
    pub bits: BitSeries,
    pub te: TeReport,
    pub handovers: HandoverReport,
    pub counters: Counters,
}

/// Generates the configured synthetic trace and simulates it.
pub fn run(config: &SimConfig) -> Result<SimReport, SimError> {
    config.validate()?;
    let trace = generate_trace(&config.mobility_with_seed(), config.horizon)?;
    run_on_trace(config, &trace)
}

pub fn run_on_trace(config: &SimConfig, trace: &RsrpTrace) -> Result<SimReport, SimError> {
    let mut sim = Simulation::new(config, trace)?;
    let mut records = Vec::with_capacity(config.horizon);
    while let Some(r) = sim.step() {
        records.push(r);
    }

    let initial = 0;
    let receiver = ActionSeries {
        actions: records.iter().map(|r| r.receiver_action).collect(),
        initial_serving: initial,
    };
    let reference = ActionSeries {
        actions: records.iter().map(|r| r.reference_action).collect(),
        initial_serving: initial,
    };

    let q = config.quantizer;
    let quantized_view: Vec<Vec<f64>> = sim
        .levels
        .iter()
        .map(|row| row.iter().map(|&l| q.dequantize(l)).collect())
        .collect();
    let horizon_trace = RsrpTrace::from_rows(
        trace.slot_duration,
        trace.cells.clone(),
        trace.rows()[..config.horizon].to_vec(),
        None,
    )?;
    let raw = encode_raw(&horizon_trace, &CodecSpec { kind: CodecKind::Raw, quantizer: q })?;
    let delta = encode_delta(&horizon_trace, &CodecSpec { kind: CodecKind::Delta, quantizer: q })?;

    let margin = serving_margin(&quantized_view, &reference);
    let source = discretize(&margin, &config.te.margin_bins)?.series;
    let target = to_symbols(&reference);
    let bound = te_bound_bits(&source, &target, &config.te.config)?;
    let estimate = te_from_slices(source.symbols(), target.symbols(), &config.te.config)?;
    let windowed = windowed_te_from_slices(
        source.symbols(),
        target.symbols(),
        &config.te.config,
        config.te.window,
        config.te.step,
    )?;

    let viability: Vec<f64> = records.iter().map(|r| r.viability).collect();
    let policy_bits = records
        .iter()
        .scan(0u64, |acc, r| {
            *acc += r.sent_bits;
            Some(*acc)
        })
        .collect();

    Ok(SimReport {
        seed: config.seed,
        horizon: config.horizon,
        config: config.clone(),
        final_viability: viability.last().copied().unwrap_or(0.0),
        viability,
        drop_slot: sim.drop_slot,
        bits: BitSeries {
            policy: policy_bits,
            raw: raw.cumulative_bits,
            delta: delta.cumulative_bits,
        },
        te: TeReport {
            global_bits: estimate.global_bits,
            bias_corrected_bits: estimate.bias_corrected_bits,
            bound: bound.cumulative,
            bound_unclipped: bound.unclipped,
            windowed,
        },
        handovers: HandoverReport {
            receiver: receiver.events(),
            reference: reference.events(),
        },
        counters: sim.counters,
    })
}
