//! Threshold-based performance antipattern detectors.
//!
//! Each detector is a heuristic over the model structure and its solved
//! performance indices. Keys ending in `_max_*` / `_ratio` are upper bounds
//! (a detector fires below them); all others are lower bounds.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PerfIndices;
use crate::model::ArchitectureModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Antipattern {
    #[serde(rename = "Pipe and Filter")]
    PipeAndFilter,
    Blob,
    #[serde(rename = "Concurrent Processing System")]
    ConcurrentProcessingSystem,
    #[serde(rename = "Extensive Processing")]
    ExtensiveProcessing,
    #[serde(rename = "Empty Semi-Truck")]
    EmptySemiTruck,
    #[serde(rename = "The Tower of Babel")]
    TowerOfBabel,
}

impl Antipattern {
    pub fn name(self) -> &'static str {
        match self {
            Antipattern::PipeAndFilter => "Pipe and Filter",
            Antipattern::Blob => "Blob",
            Antipattern::ConcurrentProcessingSystem => "Concurrent Processing System",
            Antipattern::ExtensiveProcessing => "Extensive Processing",
            Antipattern::EmptySemiTruck => "Empty Semi-Truck",
            Antipattern::TowerOfBabel => "The Tower of Babel",
        }
    }
}

impl fmt::Display for Antipattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorThresholds {
    /// Blob: a component's share of total (probability-weighted) demand.
    pub blob_demand_share: f64,
    /// Pipe and Filter: one step's share of its scenario demand...
    pub pf_step_share: f64,
    /// ...and throughput below this fraction of `1 / max_k D_k`.
    pub pf_throughput_ratio: f64,
    /// Concurrent Processing System: utilization spread across nodes...
    pub cps_utilization_gap: f64,
    /// ...with the busiest node at least this utilized.
    pub cps_max_utilization: f64,
    /// Extensive Processing: share of two consecutive steps on one component.
    pub ep_pair_share: f64,
    /// Empty Semi-Truck: inter-node messages per scenario...
    pub est_min_messages: u32,
    /// ...with mean message size at most this many KB.
    pub est_max_mean_msg_kb: f64,
    /// Tower of Babel: inter-node steps between differing data formats.
    pub tob_min_crossings: u32,
}

impl Default for DetectorThresholds {
    fn default() -> Self {
        Self {
            blob_demand_share: 0.5,
            pf_step_share: 0.6,
            pf_throughput_ratio: 0.9,
            cps_utilization_gap: 0.6,
            cps_max_utilization: 0.7,
            ep_pair_share: 0.5,
            est_min_messages: 8,
            est_max_mean_msg_kb: 1.0,
            tob_min_crossings: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Occurrence {
    pub antipattern: Antipattern,
    pub culprits: Vec<String>,
    /// The rule inputs that triggered the detector.
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AntipatternReport {
    pub occurrences: Vec<Occurrence>,
    pub count: u32,
}

impl AntipatternReport {
    pub fn names(&self) -> Vec<Antipattern> {
        let mut v: Vec<_> = self.occurrences.iter().map(|o| o.antipattern).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn fired(&self, ap: Antipattern) -> bool {
        self.occurrences.iter().any(|o| o.antipattern == ap)
    }
}

fn occurrence(ap: Antipattern, culprits: Vec<String>, values: &[(&str, f64)]) -> Occurrence {
    Occurrence {
        antipattern: ap,
        culprits,
        values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    }
}

pub fn detect_antipatterns(
    model: &ArchitectureModel,
    indices: &PerfIndices,
    thresholds: &DetectorThresholds,
) -> AntipatternReport {
    let mut occ = Vec::new();
    let resolved: Vec<_> = model.scenarios.iter().map(|s| model.resolve_steps(s)).collect();

    // Blob
    let mut per_component = vec![0.0; model.components.len()];
    let mut total = 0.0;
    for (s, steps) in model.scenarios.iter().zip(&resolved) {
        for st in steps {
            per_component[st.component] += s.prob * st.demand;
            total += s.prob * st.demand;
        }
    }
    if total > 0.0 {
        for (c, work) in per_component.iter().enumerate() {
            let share = work / total;
            if share >= thresholds.blob_demand_share {
                occ.push(occurrence(
                    Antipattern::Blob,
                    vec![model.components[c].id.clone()],
                    &[("demand_share", share)],
                ));
            }
        }
    }

    for (j, (s, steps)) in model.scenarios.iter().zip(&resolved).enumerate() {
        let scenario_demand: f64 = steps.iter().map(|st| st.demand).sum();
        let perf = indices.scenarios.get(j);

        // Pipe and Filter
        if let (Some(perf), true) = (perf, scenario_demand > 0.0) {
            let (slowest, step_demand) = steps
                .iter()
                .enumerate()
                .map(|(i, st)| (i, st.demand))
                .fold((0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
            let share = step_demand / scenario_demand;
            let bound = 1.0 / perf.bottleneck_demand;
            let ratio = perf.throughput / bound;
            if share >= thresholds.pf_step_share && ratio < thresholds.pf_throughput_ratio {
                occ.push(occurrence(
                    Antipattern::PipeAndFilter,
                    vec![s.id.clone(), s.steps[slowest].operation_ref.clone()],
                    &[("step_share", share), ("throughput_ratio", ratio)],
                ));
            }
        }

        // Extensive Processing
        if scenario_demand > 0.0 {
            let hit = steps.windows(2).enumerate().find_map(|(i, w)| {
                let share = (w[0].demand + w[1].demand) / scenario_demand;
                (w[0].component == w[1].component && share >= thresholds.ep_pair_share)
                    .then_some((i, w[0].component, share))
            });
            if let Some((_, c, share)) = hit {
                occ.push(occurrence(
                    Antipattern::ExtensiveProcessing,
                    vec![s.id.clone(), model.components[c].id.clone()],
                    &[("pair_share", share)],
                ));
            }
        }

        // Empty Semi-Truck and Tower of Babel
        let mut messages = 0u32;
        let mut volume = 0.0;
        let mut crossings = 0u32;
        for w in steps.windows(2) {
            if w[0].node == w[1].node {
                continue;
            }
            messages += 1;
            volume += w[1].msg_size;
            if model.components[w[0].component].data_format
                != model.components[w[1].component].data_format
            {
                crossings += 1;
            }
        }
        if messages > 0 {
            let mean = volume / messages as f64;
            if messages >= thresholds.est_min_messages && mean <= thresholds.est_max_mean_msg_kb {
                occ.push(occurrence(
                    Antipattern::EmptySemiTruck,
                    vec![s.id.clone()],
                    &[("messages", messages as f64), ("mean_msg_kb", mean)],
                ));
            }
        }
        if crossings >= thresholds.tob_min_crossings {
            occ.push(occurrence(
                Antipattern::TowerOfBabel,
                vec![s.id.clone()],
                &[("format_crossings", crossings as f64)],
            ));
        }
    }

    // Concurrent Processing System
    if !indices.utilization.is_empty() {
        let (max_i, max_u) = indices
            .utilization
            .iter()
            .cloned()
            .enumerate()
            .fold((0, f64::MIN), |a, x| if x.1 > a.1 { x } else { a });
        let (min_i, min_u) = indices
            .utilization
            .iter()
            .cloned()
            .enumerate()
            .fold((0, f64::MAX), |a, x| if x.1 < a.1 { x } else { a });
        let gap = max_u - min_u;
        if gap >= thresholds.cps_utilization_gap && max_u >= thresholds.cps_max_utilization {
            occ.push(occurrence(
                Antipattern::ConcurrentProcessingSystem,
                vec![model.nodes[max_i].id.clone(), model.nodes[min_i].id.clone()],
                &[("utilization_gap", gap), ("max_utilization", max_u)],
            ));
        }
    }

    let count = occ.len() as u32;
    AntipatternReport {
        occurrences: occ,
        count,
    }
}
