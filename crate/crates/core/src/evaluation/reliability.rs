//! Scenario-based system reliability.
//!
//! `θ_S = 1 − Σ_j p_j · Π_i (1−θ_i)^{InvNr_ij} · Π_l (1−ψ_l)^{MsgSize(l,j)}`
//!
//! InvNr counts steps of scenario j served by component i. MsgSize(l, j)
//! sums the message sizes of steps whose caller and callee hosts are the
//! endpoints of link l; the caller of a step is the component serving the
//! previous step, and the first step has no modeled caller.

use serde::{Deserialize, Serialize};

use crate::model::ArchitectureModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reliability {
    pub theta_s: f64,
    pub reliability: f64,
}

/// Invocation counts per component and message volume per link, for one
/// scenario index.
pub fn traffic(model: &ArchitectureModel, scenario: usize) -> (Vec<u32>, Vec<f64>) {
    let steps = model.resolve_steps(&model.scenarios[scenario]);
    let mut inv = vec![0u32; model.components.len()];
    let mut msg = vec![0.0; model.links.len()];
    for (i, step) in steps.iter().enumerate() {
        inv[step.component] += 1;
        if i == 0 {
            continue;
        }
        let caller = steps[i - 1].node;
        if caller == step.node {
            continue;
        }
        let (a, b) = (&model.nodes[caller].id, &model.nodes[step.node].id);
        for (l, link) in model.links.iter().enumerate() {
            if link.connects(a, b) {
                msg[l] += step.msg_size;
            }
        }
    }
    (inv, msg)
}

pub fn system_reliability(model: &ArchitectureModel) -> Reliability {
    let mut success = 0.0;
    for (j, scenario) in model.scenarios.iter().enumerate() {
        let (inv, msg) = traffic(model, j);
        let comp: f64 = model
            .components
            .iter()
            .zip(&inv)
            .map(|(c, n)| (1.0 - c.failure_prob).powi(*n as i32))
            .product();
        let links: f64 = model
            .links
            .iter()
            .zip(&msg)
            .map(|(l, size)| (1.0 - l.failure_prob).powf(*size))
            .product();
        success += scenario.prob * comp * links;
    }
    let theta_s = (1.0 - success).clamp(0.0, 1.0);
    Reliability {
        theta_s,
        reliability: 1.0 - theta_s,
    }
}
