//! Objective computation for candidate refactoring sequences.

pub mod antipatterns;
pub mod mva;
pub mod reliability;

use std::io::Write;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

pub use antipatterns::{
    detect_antipatterns, Antipattern, AntipatternReport, DetectorThresholds, Occurrence,
};
pub use mva::{mva, solve_mva, MvaSolution};
pub use reliability::{system_reliability, Reliability};

use crate::error::{Error, Result};
use crate::model::{derive_demands, ArchitectureModel};
use crate::refactoring::{replay_with_cost, CostParams, RefactoringAction, RefactoringSequence};

/// Number of objectives.
pub const OBJECTIVES: usize = 4;

pub const OBJECTIVE_NAMES: [&str; OBJECTIVES] = ["perfq", "reliability", "cost", "pas"];

/// `true` where the objective is maximized.
pub const MAXIMIZED: [bool; OBJECTIVES] = [true, true, false, false];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub perfq: f64,
    pub reliability: f64,
    pub cost: f64,
    pub pas: u32,
}

impl ObjectiveVector {
    /// Assigned to individuals whose evaluation failed.
    pub const SENTINEL: ObjectiveVector = ObjectiveVector {
        perfq: -1.0,
        reliability: 0.0,
        cost: 1e6,
        pas: 1000,
    };

    pub fn new(perfq: f64, reliability: f64, cost: f64, pas: u32) -> Self {
        Self {
            perfq,
            reliability,
            cost,
            pas,
        }
    }

    pub fn as_array(&self) -> [f64; OBJECTIVES] {
        [self.perfq, self.reliability, self.cost, self.pas as f64]
    }

    /// All objectives turned into minimization.
    pub fn to_min(&self) -> [f64; OBJECTIVES] {
        [-self.perfq, -self.reliability, self.cost, self.pas as f64]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPerf {
    pub scenario_id: String,
    pub response_time: f64,
    pub throughput: f64,
    /// Largest station demand, the inverse of the throughput bound.
    pub bottleneck_demand: f64,
    /// Per-node utilization in this scenario, aligned with `node_ids`.
    pub utilizations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerfIndices {
    pub node_ids: Vec<String>,
    pub scenarios: Vec<ScenarioPerf>,
    /// Probability-weighted utilization per node.
    pub utilization: Vec<f64>,
}

/// Solves every scenario of `model` independently.
pub fn solve_indices(model: &ArchitectureModel) -> Result<PerfIndices> {
    let demands = derive_demands(model);
    let mut scenarios = Vec::with_capacity(model.scenarios.len());
    let mut utilization = vec![0.0; model.nodes.len()];
    for (s, d) in model.scenarios.iter().zip(&demands) {
        let sol = mva(&d.per_node, s.population, s.think_time)?;
        for (u, su) in utilization.iter_mut().zip(&sol.utilizations) {
            *u += s.prob * su;
        }
        scenarios.push(ScenarioPerf {
            scenario_id: s.id.clone(),
            response_time: sol.response_time,
            throughput: sol.throughput,
            bottleneck_demand: d.per_node.iter().cloned().fold(0.0, f64::max),
            utilizations: sol.utilizations,
        });
    }
    Ok(PerfIndices {
        node_ids: model.nodes.iter().map(|n| n.id.clone()).collect(),
        scenarios,
        utilization,
    })
}

/// Mean over indices of `dir · (F − I)/(F + I)`, with response times
/// minimized (`dir = −1`) and throughputs maximized (`dir = +1`).
pub fn perf_q(initial: &PerfIndices, refactored: &PerfIndices) -> Result<f64> {
    if initial.scenarios.len() != refactored.scenarios.len() {
        return Err(Error::MismatchedIndices(format!(
            "{} vs {} scenarios",
            initial.scenarios.len(),
            refactored.scenarios.len()
        )));
    }
    if initial.scenarios.is_empty() {
        return Err(Error::MismatchedIndices("no performance indices".into()));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (i, f) in initial.scenarios.iter().zip(&refactored.scenarios) {
        if i.scenario_id != f.scenario_id {
            return Err(Error::MismatchedIndices(format!(
                "scenario '{}' vs '{}'",
                i.scenario_id, f.scenario_id
            )));
        }
        for (dir, iv, fv) in [
            (-1.0, i.response_time, f.response_time),
            (1.0, i.throughput, f.throughput),
        ] {
            if iv + fv <= 0.0 {
                return Err(Error::MismatchedIndices(format!(
                    "non-positive index pair for '{}'",
                    i.scenario_id
                )));
            }
            sum += index_term(dir, iv, fv);
            count += 1;
        }
    }
    Ok(sum / count as f64)
}

/// One performance index term `dir · (F − I)/(F + I)`; `dir` is `+1` for
/// maximized indices and `−1` for minimized ones.
pub fn index_term(dir: f64, initial: f64, refactored: f64) -> f64 {
    dir * (refactored - initial) / (refactored + initial)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalSettings {
    pub cost: CostParams,
    pub detectors: DetectorThresholds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub objectives: ObjectiveVector,
    pub antipatterns: AntipatternReport,
    pub indices: Option<PerfIndices>,
    /// `false` when the sentinel objectives were assigned.
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Uncached evaluation of `seq` against an initial model and its indices.
pub fn evaluate(
    initial: &ArchitectureModel,
    initial_indices: &PerfIndices,
    seq: &RefactoringSequence,
    settings: &EvalSettings,
) -> Result<Evaluation> {
    let (model, cost) = replay_with_cost(initial, &seq.actions, &settings.cost)?;
    let indices = solve_indices(&model)?;
    let perfq = perf_q(initial_indices, &indices)?;
    let rel = system_reliability(&model);
    let antipatterns = detect_antipatterns(&model, &indices, &settings.detectors);
    Ok(Evaluation {
        objectives: ObjectiveVector::new(perfq, rel.reliability, cost, antipatterns.count),
        antipatterns,
        indices: Some(indices),
        feasible: true,
        error: None,
    })
}

/// Memoizing evaluator bound to one initial model. Safe to share across
/// threads; results never depend on evaluation order.
#[derive(Debug)]
pub struct Evaluator {
    initial: Arc<ArchitectureModel>,
    initial_indices: PerfIndices,
    settings: EvalSettings,
    cache: DashMap<Vec<RefactoringAction>, Arc<Evaluation>>,
}

impl Evaluator {
    pub fn new(initial: ArchitectureModel, settings: EvalSettings) -> Result<Self> {
        settings.cost.validate()?;
        let initial_indices = solve_indices(&initial)?;
        Ok(Self {
            initial: Arc::new(initial),
            initial_indices,
            settings,
            cache: DashMap::new(),
        })
    }

    pub fn model(&self) -> &ArchitectureModel {
        &self.initial
    }

    pub fn initial_indices(&self) -> &PerfIndices {
        &self.initial_indices
    }

    pub fn settings(&self) -> &EvalSettings {
        &self.settings
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn evaluate(&self, actions: &[RefactoringAction]) -> Result<Arc<Evaluation>> {
        if let Some(hit) = self.cache.get(actions) {
            return Ok(Arc::clone(&hit));
        }
        let seq = RefactoringSequence::new(actions.to_vec());
        let eval = Arc::new(evaluate(
            &self.initial,
            &self.initial_indices,
            &seq,
            &self.settings,
        )?);
        self.cache.insert(actions.to_vec(), Arc::clone(&eval));
        Ok(eval)
    }

    /// Like [`Evaluator::evaluate`] but never fails: errors yield the
    /// sentinel objectives with `feasible = false`.
    pub fn evaluate_or_sentinel(&self, actions: &[RefactoringAction]) -> Arc<Evaluation> {
        match self.evaluate(actions) {
            Ok(e) => e,
            Err(err) => {
                let eval = Arc::new(Evaluation {
                    objectives: ObjectiveVector::SENTINEL,
                    antipatterns: AntipatternReport::default(),
                    indices: None,
                    feasible: false,
                    error: Some(err.to_string()),
                });
                self.cache.insert(actions.to_vec(), Arc::clone(&eval));
                eval
            }
        }
    }
}

/// Writes one JSON record per line: `{"chromosome": [...], "evaluation": {...}}`.
pub fn write_trace<'a, W: Write>(
    mut out: W,
    records: impl IntoIterator<Item = (&'a [RefactoringAction], &'a Evaluation)>,
) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct Record<'r> {
        chromosome: &'r [RefactoringAction],
        evaluation: &'r Evaluation,
    }
    for (chromosome, evaluation) in records {
        serde_json::to_writer(
            &mut out,
            &Record {
                chromosome,
                evaluation,
            },
        )?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
