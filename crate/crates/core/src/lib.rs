//! Effective-communication simulation for handover signalling: information
//! measures, viability scoring, synthetic RSRP traces, handover rules,
//! measurement codecs and the slot loop tying them together.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bits;
pub mod encoding;
pub mod handover;
pub mod infotheory;
pub mod scenario;
pub mod sensory;
pub mod simloop;
pub mod viability;

pub use encoding::{CodecError, CodecKind, CodecSpec, MessageLog, Quantizer, TeBound};
pub use handover::{Action, ActionSeries, HandoverAlgorithm, HandoverDecider, HandoverParams};
pub use infotheory::{BiasCorrection, BinningSpec, InfoError, ProbDist, SymbolSeries, TeConfig, TeEstimate};
pub use scenario::{MobilitySpec, RsrpTrace, TraceError, TraceEvent};
pub use simloop::{run, run_on_trace, SimConfig, SimError, SimReport, Simulation};
pub use viability::{ScenarioSpec, ViabilityCurve};
