//! Exact single-class mean value analysis for closed queueing networks with
//! a delay (think time) station.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{derive_demands, ArchitectureModel, Scenario};

/// Utilizations are reported no higher than this.
pub const MAX_UTILIZATION: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MvaSolution {
    pub response_time: f64,
    pub throughput: f64,
    /// Per-station mean queue length at the full population.
    pub queue_lengths: Vec<f64>,
    /// Per-station utilization `X·D`, clamped to [`MAX_UTILIZATION`].
    pub utilizations: Vec<f64>,
    /// `(R(n), X(n))` for n = 1..=N.
    #[serde(skip)]
    pub trajectory: Vec<(f64, f64)>,
}

/// Runs the MVA recursion over stations with the given demands.
///
/// For n = 1..=N: `R_k(n) = D_k (1 + Q_k(n-1))`, `R(n) = Σ R_k(n)`,
/// `X(n) = n / (Z + R(n))`, `Q_k(n) = X(n) R_k(n)`.
pub fn mva(demands: &[f64], population: u32, think_time: f64) -> Result<MvaSolution> {
    if population == 0 {
        return Err(Error::Degenerate("population must be at least 1".into()));
    }
    if demands.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(Error::Degenerate("demands must be finite and non-negative".into()));
    }
    if demands.iter().all(|d| *d == 0.0) {
        return Err(Error::Degenerate("all station demands are zero".into()));
    }

    let mut queue = vec![0.0; demands.len()];
    let mut residence = vec![0.0; demands.len()];
    let mut trajectory = Vec::with_capacity(population as usize);
    let mut response = 0.0;
    let mut throughput = 0.0;
    for n in 1..=population {
        response = 0.0;
        for (k, d) in demands.iter().enumerate() {
            residence[k] = d * (1.0 + queue[k]);
            response += residence[k];
        }
        throughput = n as f64 / (think_time + response);
        for k in 0..demands.len() {
            queue[k] = throughput * residence[k];
        }
        trajectory.push((response, throughput));
    }

    let d_max = demands.iter().cloned().fold(0.0, f64::max);
    let d_sum: f64 = demands.iter().sum();
    let slack = 1.0 + 1e-9;
    debug_assert!(throughput <= slack / d_max, "bottleneck bound violated");
    debug_assert!(
        throughput <= slack * population as f64 / (think_time + d_sum),
        "population bound violated"
    );
    debug_assert!(trajectory
        .windows(2)
        .all(|w| w[1].0 >= w[0].0 * (1.0 - 1e-12) && w[1].1 >= w[0].1 * (1.0 - 1e-12)));

    let utilizations = demands
        .iter()
        .map(|d| (throughput * d).min(MAX_UTILIZATION))
        .collect();
    Ok(MvaSolution {
        response_time: response,
        throughput,
        queue_lengths: queue,
        utilizations,
        trajectory,
    })
}

/// Solves one scenario of `model` with nodes as stations.
pub fn solve_mva(model: &ArchitectureModel, scenario: &Scenario) -> Result<MvaSolution> {
    let demands = derive_demands(model);
    let d = demands
        .iter()
        .find(|d| d.scenario_id == scenario.id)
        .ok_or_else(|| Error::UnknownElement(scenario.id.clone()))?;
    mva(&d.per_node, scenario.population, scenario.think_time)
}
