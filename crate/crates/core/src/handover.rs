//! LTE-style handover decisions over per-slot cell measurements.
//!
//! Two rules are implemented:
//!
//! - **A3**: a neighbour has been better than the serving cell by more than
//!   the hysteresis for `time_to_trigger` consecutive slots.
//! - **A2/A4**: the serving cell has been below `a2_threshold` for
//!   `time_to_trigger` slots (armed), and while armed a neighbour has been
//!   above `a4_threshold` for `time_to_trigger` slots.
//!
//! Among qualifying neighbours the strongest is chosen; exact ties go to the
//! lowest cell index. All counters reset after a handover.
//!
//! Both rules read whatever per-cell measurement the trace carries (RSRP for
//! every trace this crate produces).

use serde::{Deserialize, Serialize};

use crate::infotheory::SymbolSeries;
use crate::scenario::RsrpTrace;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HandoverAlgorithm {
    #[default]
    A3Rsrp,
    A2A4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HandoverParams {
    pub algorithm: HandoverAlgorithm,
    /// dB
    pub hysteresis: f64,
    /// dBm
    pub a2_threshold: f64,
    /// dBm
    pub a4_threshold: f64,
    /// slots
    pub time_to_trigger: usize,
}

impl Default for HandoverParams {
    fn default() -> Self {
        Self {
            algorithm: HandoverAlgorithm::A3Rsrp,
            hysteresis: 3.0,
            a2_threshold: -110.0,
            a4_threshold: -100.0,
            time_to_trigger: 2,
        }
    }
}

impl HandoverParams {
    pub fn a3() -> Self {
        Self::default()
    }

    pub fn a2a4() -> Self {
        Self {
            algorithm: HandoverAlgorithm::A2A4,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.hysteresis >= 0.0) {
            return Err(format!(
                "hysteresis must be non-negative, got {}",
                self.hysteresis
            ));
        }
        if self.time_to_trigger < 1 {
            return Err("time_to_trigger must be at least 1 slot".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "action", content = "target")]
pub enum Action {
    #[default]
    Stay,
    Handover(usize),
}

impl Action {
    pub fn is_handover(&self) -> bool {
        matches!(self, Action::Handover(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandoverEvent {
    pub slot: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSeries {
    pub actions: Vec<Action>,
    pub initial_serving: usize,
}

impl ActionSeries {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Serving cell in effect at the start of each slot, before that slot's
    /// action.
    pub fn serving_before(&self) -> Vec<usize> {
        let mut serving = self.initial_serving;
        self.actions
            .iter()
            .map(|a| {
                let now = serving;
                if let Action::Handover(to) = *a {
                    serving = to;
                }
                now
            })
            .collect()
    }

    pub fn events(&self) -> Vec<HandoverEvent> {
        let mut serving = self.initial_serving;
        let mut out = Vec::new();
        for (slot, a) in self.actions.iter().enumerate() {
            if let Action::Handover(to) = *a {
                out.push(HandoverEvent {
                    slot,
                    from: serving,
                    to,
                });
                serving = to;
            }
        }
        out
    }

    pub fn handover_count(&self) -> usize {
        self.actions.iter().filter(|a| a.is_handover()).count()
    }
}

/// Incremental handover state machine for one UE.
#[derive(Debug, Clone, PartialEq)]
pub struct HandoverDecider {
    params: HandoverParams,
    serving: usize,
    /// Consecutive slots each neighbour has met its entry condition.
    neighbor_run: Vec<usize>,
    /// Consecutive slots the serving cell has been below the A2 threshold.
    a2_run: usize,
}

impl HandoverDecider {
    pub fn new(params: HandoverParams, cells: usize, initial_serving: usize) -> Self {
        assert!(initial_serving < cells, "serving cell out of range");
        Self {
            params,
            serving: initial_serving,
            neighbor_run: vec![0; cells],
            a2_run: 0,
        }
    }

    pub fn serving(&self) -> usize {
        self.serving
    }

    pub fn params(&self) -> &HandoverParams {
        &self.params
    }

    pub fn is_armed(&self) -> bool {
        self.a2_run >= self.params.time_to_trigger
    }

    /// Forgets trigger progress and adopts `serving` as the serving cell.
    pub fn reset(&mut self, serving: usize) {
        self.serving = serving;
        self.neighbor_run.iter_mut().for_each(|c| *c = 0);
        self.a2_run = 0;
    }

    /// Feeds one slot of per-cell measurements and returns the decision.
    pub fn step(&mut self, meas: &[f64]) -> Action {
        assert_eq!(meas.len(), self.neighbor_run.len(), "measurement width");
        let ttt = self.params.time_to_trigger;
        let serving_level = meas[self.serving];
        match self.params.algorithm {
            HandoverAlgorithm::A3Rsrp => {
                let threshold = serving_level + self.params.hysteresis;
                for (cell, run) in self.neighbor_run.iter_mut().enumerate() {
                    *run = if cell != self.serving && meas[cell] > threshold {
                        *run + 1
                    } else {
                        0
                    };
                }
            }
            HandoverAlgorithm::A2A4 => {
                self.a2_run = if serving_level < self.params.a2_threshold {
                    self.a2_run + 1
                } else {
                    0
                };
                let armed = self.a2_run >= ttt;
                for (cell, run) in self.neighbor_run.iter_mut().enumerate() {
                    *run = if armed && cell != self.serving && meas[cell] > self.params.a4_threshold
                    {
                        *run + 1
                    } else {
                        0
                    };
                }
            }
        }

        let target = self
            .neighbor_run
            .iter()
            .enumerate()
            .filter(|&(_, &run)| run >= ttt)
            .map(|(cell, _)| cell)
            .fold(None, |best: Option<usize>, cell| match best {
                Some(b) if meas[b] >= meas[cell] => Some(b),
                _ => Some(cell),
            });
        match target {
            Some(to) => {
                self.reset(to);
                Action::Handover(to)
            }
            None => Action::Stay,
        }
    }
}

fn decide_with(trace: &RsrpTrace, params: &HandoverParams) -> ActionSeries {
    let mut decider = HandoverDecider::new(*params, trace.num_cells(), 0);
    ActionSeries {
        actions: trace.rows().iter().map(|row| decider.step(row)).collect(),
        initial_serving: 0,
    }
}

/// A3 decisions, starting on the primary cell.
pub fn decide_a3(trace: &RsrpTrace, params: &HandoverParams) -> ActionSeries {
    decide_with(
        trace,
        &HandoverParams {
            algorithm: HandoverAlgorithm::A3Rsrp,
            ..*params
        },
    )
}

/// A2/A4 decisions, starting on the primary cell.
pub fn decide_a2a4(trace: &RsrpTrace, params: &HandoverParams) -> ActionSeries {
    decide_with(
        trace,
        &HandoverParams {
            algorithm: HandoverAlgorithm::A2A4,
            ..*params
        },
    )
}

/// Runs whichever algorithm `params` selects.
pub fn decide(trace: &RsrpTrace, params: &HandoverParams) -> ActionSeries {
    decide_with(trace, params)
}

/// Binary series: 1 at handover slots.
pub fn to_symbols(actions: &ActionSeries) -> SymbolSeries {
    SymbolSeries::new(
        actions
            .actions
            .iter()
            .map(|a| usize::from(a.is_handover()))
            .collect(),
        2,
    )
    .expect("binary symbols")
}

/// Best neighbour minus serving cell, per slot, with the serving cell taken
/// from `actions` as of the start of the slot. With a single cell the margin
/// is 0.
pub fn serving_margin(rows: &[Vec<f64>], actions: &ActionSeries) -> Vec<f64> {
    rows.iter()
        .zip(actions.serving_before())
        .map(|(row, serving)| {
            row.iter()
                .enumerate()
                .filter(|&(cell, _)| cell != serving)
                .map(|(_, &v)| v - row[serving])
                .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))))
                .unwrap_or(0.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(columns: Vec<Vec<f64>>) -> RsrpTrace {
        let n = columns.len();
        RsrpTrace::from_columns(1.0, RsrpTrace::default_cell_names(n), columns).unwrap()
    }

    #[test]
    fn a3_hand_stepped_example() {
        let t = trace(vec![vec![-90.0; 4], vec![-95.0, -88.0, -86.0, -85.0]]);
        let params = HandoverParams::default();
        let a = decide_a3(&t, &params);
        assert_eq!(
            a.actions,
            vec![Action::Stay, Action::Stay, Action::Stay, Action::Handover(1)]
        );
    }

    #[test]
    fn a3_neighbor_below_margin_stays() {
        let t = trace(vec![vec![-90.0; 6], vec![-87.0; 6]]);
        let a = decide_a3(&t, &HandoverParams::default());
        assert!(a.actions.iter().all(|a| *a == Action::Stay));
    }

    #[test]
    fn a3_tie_goes_to_lowest_index() {
        let t = trace(vec![vec![-100.0; 3], vec![-90.0; 3], vec![-90.0; 3]]);
        let a = decide_a3(&t, &HandoverParams::default());
        assert_eq!(a.actions[1], Action::Handover(1));
        let t = trace(vec![vec![-100.0; 3], vec![-91.0; 3], vec![-90.0; 3]]);
        let a = decide_a3(&t, &HandoverParams::default());
        assert_eq!(a.actions[1], Action::Handover(2));
    }

    #[test]
    fn a3_counters_reset_after_handover() {
        // After moving to cell 1, cell 0 needs a fresh run of TTT slots.
        let t = trace(vec![
            vec![-100.0, -100.0, -80.0, -80.0, -80.0],
            vec![-90.0, -90.0, -90.0, -90.0, -90.0],
        ]);
        let a = decide_a3(&t, &HandoverParams::default());
        assert_eq!(
            a.actions,
            vec![
                Action::Stay,
                Action::Handover(1),
                Action::Stay,
                Action::Handover(0),
                Action::Stay
            ]
        );
        assert_eq!(a.serving_before(), vec![0, 0, 1, 1, 0]);
    }

    #[test]
    fn a2a4_hand_stepped_example() {
        let t = trace(vec![vec![-115.0; 4], vec![-95.0; 4]]);
        let a = decide_a2a4(&t, &HandoverParams::default());
        // armed at slot 1, A4 satisfied at slots 1 and 2
        assert_eq!(a.actions[2], Action::Handover(1));
        assert_eq!(a.handover_count(), 1);
    }

    #[test]
    fn a2a4_good_serving_stays() {
        let t = trace(vec![vec![-90.0; 6], vec![-60.0; 6]]);
        let a = decide_a2a4(&t, &HandoverParams::default());
        assert_eq!(a.handover_count(), 0);
    }

    #[test]
    fn a2a4_armed_without_candidate() {
        let t = trace(vec![vec![-115.0; 6], vec![-105.0; 6]]);
        let params = HandoverParams::a2a4();
        let mut d = HandoverDecider::new(params, 2, 0);
        for row in t.rows() {
            assert_eq!(d.step(row), Action::Stay);
        }
        assert!(d.is_armed());
    }

    #[test]
    fn symbols_mark_handovers() {
        let mut actions = vec![Action::Stay; 10];
        assert_eq!(
            to_symbols(&ActionSeries {
                actions: actions.clone(),
                initial_serving: 0
            })
            .symbols(),
            &[0; 10]
        );
        actions[5] = Action::Handover(1);
        let s = to_symbols(&ActionSeries {
            actions,
            initial_serving: 0,
        });
        assert_eq!(s.symbols().iter().position(|&x| x == 1), Some(5));
        assert_eq!(s.symbols().iter().sum::<usize>(), 1);
    }

    #[test]
    fn margin_follows_serving_cell() {
        let rows = vec![vec![-80.0, -90.0, -85.0], vec![-80.0, -90.0, -85.0]];
        let actions = ActionSeries {
            actions: vec![Action::Handover(2), Action::Stay],
            initial_serving: 0,
        };
        assert_eq!(serving_margin(&rows, &actions), vec![-5.0, 5.0]);
    }

    #[test]
    fn validation() {
        assert!(HandoverParams::default().validate().is_ok());
        assert!(HandoverParams {
            time_to_trigger: 0,
            ..HandoverParams::default()
        }
        .validate()
        .is_err());
        assert!(HandoverParams {
            hysteresis: -1.0,
            ..HandoverParams::default()
        }
        .validate()
        .is_err());
    }
}
