//! Receiver viability: negative Shannon entropy of the receiver's belief over
//! the handover instant, with a fixed penalty once the call has dropped.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::infotheory::{shannon_entropy, InfoError, ProbDist};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioSpecError {
    #[error("deadline {deadline} must satisfy 1 <= deadline < horizon ({horizon})")]
    Deadline { deadline: usize, horizon: usize },
    #[error("need at least 2 candidate instants, got {0}")]
    TooFewCandidates(usize),
    #[error("drop penalty {penalty} must be below -log2(candidates) = {bound}")]
    Penalty { penalty: f64, bound: f64 },
}

/// Receiver uncertainty over candidate handover instants.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief {
    pub dist: ProbDist,
}

impl Belief {
    pub fn new(dist: ProbDist) -> Self {
        Self { dist }
    }

    /// Uniform over `spread` of the `candidates` instants, zero elsewhere.
    pub fn widened(candidates: usize, spread: usize) -> Result<Self, InfoError> {
        let spread = spread.clamp(1, candidates.max(1));
        let mut probs = vec![0.0; candidates.max(1)];
        for p in probs.iter_mut().take(spread) {
            *p = 1.0 / spread as f64;
        }
        Ok(Self {
            dist: ProbDist::new(probs)?,
        })
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.dist)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioSpec {
    pub horizon: usize,
    /// Last slot at which the handover may still be made.
    pub deadline: usize,
    pub candidate_instants: usize,
    pub drop_penalty: f64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            horizon: 5,
            deadline: 3,
            candidate_instants: 4,
            drop_penalty: -100.0,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), ScenarioSpecError> {
        if self.deadline < 1 || self.deadline >= self.horizon {
            return Err(ScenarioSpecError::Deadline {
                deadline: self.deadline,
                horizon: self.horizon,
            });
        }
        if self.candidate_instants < 2 {
            return Err(ScenarioSpecError::TooFewCandidates(self.candidate_instants));
        }
        let bound = -(self.candidate_instants as f64).log2();
        if !(self.drop_penalty < bound) {
            return Err(ScenarioSpecError::Penalty {
                penalty: self.drop_penalty,
                bound,
            });
        }
        Ok(())
    }

    /// Entropy of the uninformed belief.
    pub fn prior_entropy(&self) -> f64 {
        (self.candidate_instants as f64).log2()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViabilityCurve {
    pub values: Vec<f64>,
    pub drop_slot: Option<usize>,
}

pub fn viability_from_belief(belief: &Belief, dropped: bool, spec: &ScenarioSpec) -> f64 {
    if dropped {
        spec.drop_penalty
    } else {
        // 0 - h rather than -h: a certain belief reports +0.0, not -0.0
        0.0 - belief.entropy()
    }
}

/// Best attainable viability given `i_bits` of information about the
/// handover instant: each bit removes one bit of belief entropy.
pub fn viability_vs_information(i_bits: f64, spec: &ScenarioSpec) -> f64 {
    let residual = (spec.prior_entropy() - i_bits.max(0.0)).max(0.0);
    if residual == 0.0 {
        0.0
    } else {
        -residual
    }
}

/// The two curves of the toy handover scenario.
///
/// With full measurement data the receiver always knows the handover instant
/// (degenerate belief) and hands over at the deadline. Without data its belief
/// widens by one candidate instant per slot, and the call drops right after
/// the deadline.
pub fn fictitious_scenario(
    spec: &ScenarioSpec,
) -> Result<(ViabilityCurve, ViabilityCurve), ScenarioSpecError> {
    spec.validate()?;
    let c = spec.candidate_instants;
    let full_info = ViabilityCurve {
        values: (0..spec.horizon)
            .map(|_| {
                let b = Belief::widened(c, 1).expect("valid belief");
                viability_from_belief(&b, false, spec)
            })
            .collect(),
        drop_slot: None,
    };
    let drop_slot = (spec.deadline + 1 < spec.horizon).then_some(spec.deadline + 1);
    let no_info = ViabilityCurve {
        values: (0..spec.horizon)
            .map(|t| {
                let b = Belief::widened(c, t + 1).expect("valid belief");
                viability_from_belief(&b, t > spec.deadline, spec)
            })
            .collect(),
        drop_slot,
    };
    Ok((full_info, no_info))
}

/// Samples `viability_vs_information` on `[0, max_bits]` at `step` spacing.
pub fn information_sweep(spec: &ScenarioSpec, max_bits: f64, step: f64) -> Vec<(f64, f64)> {
    assert!(step > 0.0, "sweep step must be positive");
    let n = (max_bits / step).floor() as usize;
    (0..=n)
        .map(|i| {
            let bits = i as f64 * step;
            (bits, viability_vs_information(bits, spec))
        })
        .collect()
}
