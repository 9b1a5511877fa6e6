//! Specification-guided partition refinement.

mod score;

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abstraction::{build_imc, update_imc, AbstractionError, SystemModel};
use crate::dra::Dra;
use crate::geometry::{uncertain_volume, Class, GeometryError, Partition};
use crate::registry::{params, Registry};
use crate::verifier::{verify, SolverOptions, Spec, VerificationResult, VerifyError};

pub use score::{score_states, score_states_with, select_cells};

#[derive(Debug, Error)]
pub enum RefineError {
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid refinement setting: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RefinementConfig {
    pub v_stop: f64,
    pub p_stop: f64,
    pub theta: f64,
    pub max_rounds: usize,
    pub max_cells: usize,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        Self {
            v_stop: 0.1,
            p_stop: 1e-4,
            theta: 0.1,
            max_rounds: 50,
            max_cells: 5000,
        }
    }
}

impl RefinementConfig {
    pub fn validate(&self) -> Result<(), RefineError> {
        if !(0.0..=1.0).contains(&self.v_stop) {
            return Err(RefineError::Config(format!("v_stop {} not in [0,1]", self.v_stop)));
        }
        if !(self.p_stop > 0.0 && self.p_stop < 1.0) {
            return Err(RefineError::Config(format!("p_stop {} not in (0,1)", self.p_stop)));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(RefineError::Config(format!("theta {} not in (0,1]", self.theta)));
        }
        Ok(())
    }
}

/// Assigns refinement scores to the IMC states of a verification result.
pub trait Scorer: Send + Sync {
    fn name(&self) -> &str;
    fn score(&self, result: &VerificationResult, p_stop: f64) -> Vec<f64>;
}

/// Path-exploration scoring over the best-case product chain. With
/// `credit_unowned`, potential states that no potential BSCC owns credit
/// their own cell, so undecided cells next to permanent components keep
/// being refined.
#[derive(Debug, Clone, Copy)]
pub struct SpecGuided {
    pub credit_unowned: bool,
}

impl Default for SpecGuided {
    fn default() -> Self {
        Self { credit_unowned: true }
    }
}

impl Scorer for SpecGuided {
    fn name(&self) -> &str {
        if self.credit_unowned {
            "spec-guided"
        } else {
            "spec-guided-literal"
        }
    }

    fn score(&self, result: &VerificationResult, p_stop: f64) -> Vec<f64> {
        score_states_with(result, p_stop, self.credit_unowned)
    }
}

/// Baseline: every undecided state scores one.
#[derive(Debug, Clone, Copy, Default)]
pub struct AllUndecided;

impl Scorer for AllUndecided {
    fn name(&self) -> &str {
        "all-undecided"
    }

    fn score(&self, result: &VerificationResult, _p_stop: f64) -> Vec<f64> {
        result
            .classes
            .iter()
            .map(|&c| if c == Class::Undecided { 1.0 } else { 0.0 })
            .collect()
    }
}

pub fn scorer_registry() -> Registry<Box<dyn Scorer>> {
    let mut r: Registry<Box<dyn Scorer>> = Registry::new("scorer");
    r.register("spec-guided", |v| {
        params::<serde_json::Map<String, serde_json::Value>>("spec-guided", v)?;
        Ok(Box::new(SpecGuided::default()))
    });
    r.register("spec-guided-literal", |v| {
        params::<serde_json::Map<String, serde_json::Value>>("spec-guided-literal", v)?;
        Ok(Box::new(SpecGuided { credit_unowned: false }))
    });
    r.register("all-undecided", |v| {
        params::<serde_json::Map<String, serde_json::Value>>("all-undecided", v)?;
        Ok(Box::new(AllUndecided))
    });
    r
}

/// Splits the cells selected from `scores` with threshold `theta`, at most
/// `limit` of them (highest scores first). Returns the changed cell indices
/// and the selected cells that were too small to split.
pub fn select_and_split(
    partition: &mut Partition,
    scores: &[f64],
    theta: f64,
    limit: usize,
) -> (Vec<usize>, Vec<usize>) {
    let mut sel = select_cells(scores, theta);
    sel.truncate(limit);
    let (changed, skipped) = partition.split_cells(&sel);
    for &j in &skipped {
        log::warn!("cell {j} is too small to split");
    }
    (changed, skipped)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Converged,
    MaxRounds,
    MaxCells,
    /// Nothing left to split while still above the volume threshold.
    Stalled,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Converged => "converged",
            Outcome::MaxRounds => "max_rounds",
            Outcome::MaxCells => "max_cells",
            Outcome::Stalled => "stalled",
        }
    }

    pub fn is_budget(self) -> bool {
        !matches!(self, Outcome::Converged)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundReport {
    pub round: usize,
    pub cells: usize,
    pub uncertain_volume: f64,
    pub yes: usize,
    pub no: usize,
    pub undecided: usize,
    pub rows_rebuilt: usize,
    /// Cells decided opposite to a decision made earlier on an ancestor.
    pub flips: usize,
    pub elapsed_secs: f64,
}

/// Everything produced by one round, handed to the observer.
pub struct RoundView<'a> {
    pub report: &'a RoundReport,
    pub partition: &'a Partition,
    pub result: &'a VerificationResult,
}

#[derive(Debug)]
pub struct RefinementRun {
    pub rounds: Vec<RoundReport>,
    pub outcome: Outcome,
    pub partition: Partition,
    pub result: VerificationResult,
}

impl RefinementRun {
    pub fn total_flips(&self) -> usize {
        self.rounds.iter().map(|r| r.flips).sum()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Seen {
    yes: bool,
    no: bool,
}

/// Abstraction, verification and refinement until the undecided volume drops
/// to `config.v_stop` or a budget runs out.
#[allow(clippy::too_many_arguments)]
pub fn refine_loop(
    model: &SystemModel,
    partition: Partition,
    dra: &Dra,
    spec: &Spec,
    config: &RefinementConfig,
    solver: &SolverOptions,
    scorer: &dyn Scorer,
    mut observer: impl FnMut(&RoundView<'_>),
) -> Result<RefinementRun, RefineError> {
    config.validate()?;
    let start = Instant::now();
    let mut partition = partition;
    let mut imc = build_imc(model, &partition)?;
    let mut rows_rebuilt = partition.len();
    let mut seen = vec![Seen::default(); partition.len()];
    let mut rounds = Vec::new();
    let mut round = 0;
    loop {
        let result = verify(&imc, dra, spec, solver)?;
        let v = uncertain_volume(&partition, &result.classes)?;
        let mut flips = 0;
        for (j, &c) in result.classes.iter().enumerate() {
            match c {
                Class::Yes => {
                    flips += usize::from(seen[j].no);
                    seen[j].yes = true;
                }
                Class::No => {
                    flips += usize::from(seen[j].yes);
                    seen[j].no = true;
                }
                Class::Undecided => {}
            }
        }
        if flips > 0 {
            log::error!("round {round}: {flips} cells flipped between yes and no");
        }
        let report = RoundReport {
            round,
            cells: partition.len(),
            uncertain_volume: v,
            yes: result.count(Class::Yes),
            no: result.count(Class::No),
            undecided: result.count(Class::Undecided),
            rows_rebuilt,
            flips,
            elapsed_secs: start.elapsed().as_secs_f64(),
        };
        log::info!(
            "round {} cells {} uncertain {:.6} elapsed {:.3}s",
            report.round,
            report.cells,
            report.uncertain_volume,
            report.elapsed_secs
        );
        observer(&RoundView {
            report: &report,
            partition: &partition,
            result: &result,
        });
        rounds.push(report);

        let outcome = if v <= config.v_stop {
            Some(Outcome::Converged)
        } else if round >= config.max_rounds {
            Some(Outcome::MaxRounds)
        } else if partition.len() >= config.max_cells {
            Some(Outcome::MaxCells)
        } else {
            None
        };
        if let Some(outcome) = outcome {
            return Ok(RefinementRun {
                rounds,
                outcome,
                partition,
                result,
            });
        }

        let scores = scorer.score(&result, config.p_stop);
        let old_len = partition.len();
        let (changed, _) = select_and_split(
            &mut partition,
            &scores,
            config.theta,
            config.max_cells - old_len,
        );
        if changed.is_empty() {
            return Ok(RefinementRun {
                rounds,
                outcome: Outcome::Stalled,
                partition,
                result,
            });
        }
        let parents: Vec<usize> = changed.iter().copied().filter(|&j| j < old_len).collect();
        for &p in &parents {
            seen.push(seen[p]);
        }
        drop(result);
        let (next, stats) = update_imc(model, &imc, &partition, &changed)?;
        imc = next;
        rows_rebuilt = stats.rows_rebuilt;
        round += 1;
    }
}
