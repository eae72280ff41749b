//! Annotated architecture models: components, deployment nodes, links and
//! closed-workload scenarios, plus the document format they are stored in.
//!
//! A model document is JSON with a `format` version key. Units are fixed:
//! operation demands are CPU seconds per invocation and message sizes are KB.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Current model document version.
pub const MODEL_FORMAT: u32 = 1;

/// Probabilities of all scenarios must sum to one within this tolerance.
pub const PROB_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchitectureModel {
    pub format: u32,
    pub name: String,
    pub components: Vec<Component>,
    pub nodes: Vec<ProcNode>,
    #[serde(default)]
    pub links: Vec<Link>,
    pub scenarios: Vec<Scenario>,
    /// component id -> node id
    pub deployment: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    #[serde(default)]
    pub operations: Vec<Operation>,
    pub failure_prob: f64,
    pub data_format: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Operation {
    pub id: String,
    /// CPU seconds per invocation on a node with speed factor 1.
    pub demand: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcNode {
    pub id: String,
    pub speed_factor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replica_group: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub id: String,
    pub endpoints: (String, String),
    pub failure_prob: f64,
}

impl Link {
    pub fn connects(&self, a: &str, b: &str) -> bool {
        (self.endpoints.0 == a && self.endpoints.1 == b)
            || (self.endpoints.0 == b && self.endpoints.1 == a)
    }

    pub fn touches(&self, node: &str) -> bool {
        self.endpoints.0 == node || self.endpoints.1 == node
    }

    /// The endpoint opposite to `node`, if `node` is an endpoint.
    pub fn other_end(&self, node: &str) -> Option<&str> {
        if self.endpoints.0 == node {
            Some(&self.endpoints.1)
        } else if self.endpoints.1 == node {
            Some(&self.endpoints.0)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub prob: f64,
    /// Closed-workload population.
    pub population: u32,
    /// Think time in seconds.
    pub think_time: f64,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub operation_ref: String,
    /// KB carried by the message that triggers this invocation.
    #[serde(default)]
    pub msg_size: f64,
}

/// Parse and validate a model document.
pub fn load_model(bytes: &[u8]) -> Result<ArchitectureModel> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("document is not UTF-8: {e}"),
    })?;
    let model: ArchitectureModel = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if model.format != MODEL_FORMAT {
        return Err(Error::Parse {
            line: 0,
            column: 0,
            message: format!(
                "unsupported model format {} (expected {MODEL_FORMAT})",
                model.format
            ),
        });
    }
    let violations = validate(&model);
    if violations.is_empty() {
        Ok(model)
    } else {
        Err(Error::Validation(violations))
    }
}

pub fn load_model_file(path: impl AsRef<std::path::Path>) -> Result<ArchitectureModel> {
    let bytes = std::fs::read(path.as_ref())?;
    load_model(&bytes)
}

/// Serialize to the document format. `load_model(serialize(m)) == m`.
pub fn serialize(model: &ArchitectureModel) -> String {
    serde_json::to_string_pretty(model).expect("model serialization is infallible")
}

/// Every violated invariant, each naming the offending element.
pub fn validate(model: &ArchitectureModel) -> Vec<String> {
    let mut out = Vec::new();

    let mut seen = BTreeSet::new();
    for c in &model.components {
        if !seen.insert(c.id.as_str()) {
            out.push(format!("duplicate component id '{}'", c.id));
        }
        if !(0.0..=1.0).contains(&c.failure_prob) {
            out.push(format!(
                "component '{}' failure_prob {} outside [0, 1]",
                c.id, c.failure_prob
            ));
        }
    }

    let mut op_owners: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &model.components {
        for op in &c.operations {
            *op_owners.entry(op.id.as_str()).or_default() += 1;
            if !(op.demand > 0.0 && op.demand.is_finite()) {
                out.push(format!(
                    "operation '{}' on component '{}' has non-positive demand {}",
                    op.id, c.id, op.demand
                ));
            }
        }
    }
    for (op, n) in &op_owners {
        if *n > 1 {
            out.push(format!("operation '{op}' is defined on {n} components"));
        }
    }

    let mut node_ids = BTreeSet::new();
    for n in &model.nodes {
        if !node_ids.insert(n.id.as_str()) {
            out.push(format!("duplicate node id '{}'", n.id));
        }
        if !(n.speed_factor > 0.0 && n.speed_factor.is_finite()) {
            out.push(format!(
                "node '{}' has non-positive speed_factor {}",
                n.id, n.speed_factor
            ));
        }
    }

    let mut link_ids = BTreeSet::new();
    for l in &model.links {
        if !link_ids.insert(l.id.as_str()) {
            out.push(format!("duplicate link id '{}'", l.id));
        }
        if l.endpoints.0 == l.endpoints.1 {
            out.push(format!("link '{}' has identical endpoints", l.id));
        }
        for end in [&l.endpoints.0, &l.endpoints.1] {
            if !node_ids.contains(end.as_str()) {
                out.push(format!("link '{}' references unknown node '{end}'", l.id));
            }
        }
        if !(0.0..=1.0).contains(&l.failure_prob) {
            out.push(format!(
                "link '{}' failure_prob {} outside [0, 1]",
                l.id, l.failure_prob
            ));
        }
    }

    for c in &model.components {
        match model.deployment.get(&c.id) {
            None => out.push(format!("component '{}' is not deployed", c.id)),
            Some(node) if !node_ids.contains(node.as_str()) => out.push(format!(
                "component '{}' is deployed on missing node '{node}'",
                c.id
            )),
            Some(_) => {}
        }
    }
    for comp in model.deployment.keys() {
        if !model.components.iter().any(|c| &c.id == comp) {
            out.push(format!("deployment entry for unknown component '{comp}'"));
        }
    }

    let mut scenario_ids = BTreeSet::new();
    let mut prob_sum = 0.0;
    for s in &model.scenarios {
        if !scenario_ids.insert(s.id.as_str()) {
            out.push(format!("duplicate scenario id '{}'", s.id));
        }
        if !(0.0..=1.0).contains(&s.prob) {
            out.push(format!("scenario '{}' prob {} outside [0, 1]", s.id, s.prob));
        }
        if s.population < 1 {
            out.push(format!("scenario '{}' has population 0", s.id));
        }
        if !(s.think_time >= 0.0 && s.think_time.is_finite()) {
            out.push(format!(
                "scenario '{}' has negative think_time {}",
                s.id, s.think_time
            ));
        }
        if s.steps.is_empty() {
            out.push(format!("scenario '{}' has no steps", s.id));
        }
        for (i, step) in s.steps.iter().enumerate() {
            if !op_owners.contains_key(step.operation_ref.as_str()) {
                out.push(format!(
                    "scenario '{}' step {i} references unknown operation '{}'",
                    s.id, step.operation_ref
                ));
            }
            if !(step.msg_size >= 0.0 && step.msg_size.is_finite()) {
                out.push(format!(
                    "scenario '{}' step {i} has negative msg_size {}",
                    s.id, step.msg_size
                ));
            }
        }
        prob_sum += s.prob;
    }
    if (prob_sum - 1.0).abs() > PROB_SUM_TOLERANCE {
        out.push(format!("scenario probabilities sum to {}", round_for_display(prob_sum)));
    }

    out
}

fn round_for_display(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

impl ArchitectureModel {
    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn node(&self, id: &str) -> Option<&ProcNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// Index of the component owning operation `op`.
    pub fn owner_index(&self, op: &str) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.operations.iter().any(|o| o.id == op))
    }

    pub fn operation(&self, op: &str) -> Option<(&Component, &Operation)> {
        self.components
            .iter()
            .find_map(|c| c.operations.iter().find(|o| o.id == op).map(|o| (c, o)))
    }

    pub fn host_of(&self, component: &str) -> Option<&str> {
        self.deployment.get(component).map(String::as_str)
    }

    pub fn operation_count(&self) -> usize {
        self.components.iter().map(|c| c.operations.len()).sum()
    }

    /// Members of the replica group that `node` belongs to, in model order.
    /// A node without a group is its own single member.
    pub fn replica_members(&self, node: &str) -> Vec<usize> {
        let group = self.node(node).and_then(|n| n.replica_group.as_deref());
        match group {
            Some(g) => self
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.replica_group.as_deref() == Some(g))
                .map(|(i, _)| i)
                .collect(),
            None => self.node_index(node).into_iter().collect(),
        }
    }

    /// Resolve every step into (component index, node index) once.
    pub fn resolve_steps(&self, scenario: &Scenario) -> Vec<ResolvedStep> {
        scenario
            .steps
            .iter()
            .map(|step| {
                let component = self
                    .owner_index(&step.operation_ref)
                    .expect("validated model: step operation exists");
                let comp = &self.components[component];
                let demand = comp
                    .operations
                    .iter()
                    .find(|o| o.id == step.operation_ref)
                    .map(|o| o.demand)
                    .unwrap_or(0.0);
                let node = self
                    .host_of(&comp.id)
                    .and_then(|n| self.node_index(n))
                    .expect("validated model: component deployed");
                ResolvedStep {
                    component,
                    node,
                    demand,
                    msg_size: step.msg_size,
                }
            })
            .collect()
    }
}

/// A scenario step with its owner and host looked up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedStep {
    pub component: usize,
    pub node: usize,
    pub demand: f64,
    pub msg_size: f64,
}

/// Aggregated service demand per node for one scenario, aligned with
/// `model.nodes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioDemands {
    pub scenario_id: String,
    pub per_node: Vec<f64>,
}

impl ScenarioDemands {
    pub fn total(&self) -> f64 {
        self.per_node.iter().sum()
    }

    pub fn as_map<'a>(&self, model: &'a ArchitectureModel) -> BTreeMap<&'a str, f64> {
        model
            .nodes
            .iter()
            .zip(&self.per_node)
            .map(|(n, d)| (n.id.as_str(), *d))
            .collect()
    }
}

/// Per-scenario station demands. Work on a replicated node is split evenly
/// across its replica group; each member's share is scaled by that member's
/// speed factor.
pub fn derive_demands(model: &ArchitectureModel) -> Vec<ScenarioDemands> {
    model
        .scenarios
        .iter()
        .map(|s| {
            let mut per_node = vec![0.0; model.nodes.len()];
            for step in model.resolve_steps(s) {
                let host = &model.nodes[step.node];
                let members = model.replica_members(&host.id);
                let share = step.demand / members.len() as f64;
                for m in members {
                    per_node[m] += share / model.nodes[m].speed_factor;
                }
            }
            ScenarioDemands {
                scenario_id: s.id.clone(),
                per_node,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ArchitectureModel {
        ArchitectureModel {
            format: 1,
            name: "min".into(),
            components: vec![Component {
                id: "c1".into(),
                operations: vec![Operation {
                    id: "o1".into(),
                    demand: 0.2,
                }],
                failure_prob: 0.0,
                data_format: "json".into(),
            }],
            nodes: vec![ProcNode {
                id: "n1".into(),
                speed_factor: 1.0,
                replica_group: None,
            }],
            links: vec![],
            scenarios: vec![Scenario {
                id: "s1".into(),
                prob: 1.0,
                population: 1,
                think_time: 0.0,
                steps: vec![Step {
                    operation_ref: "o1".into(),
                    msg_size: 0.0,
                }],
            }],
            deployment: [("c1".to_string(), "n1".to_string())].into(),
        }
    }

    #[test]
    fn minimal_document_loads() {
        let doc = serialize(&minimal());
        let m = load_model(doc.as_bytes()).unwrap();
        let total: f64 = m.scenarios.iter().map(|s| s.prob).sum();
        assert_eq!(total, 1.0);
        assert_eq!(m, minimal());
    }

    #[test]
    fn missing_node_names_component() {
        let mut m = minimal();
        m.deployment.insert("c1".into(), "nowhere".into());
        let err = load_model(serialize(&m).as_bytes()).unwrap_err();
        match err {
            Error::Validation(v) => {
                assert_eq!(v.len(), 1);
                assert!(v[0].contains("'c1'"), "{v:?}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_error_carries_position() {
        let err = load_model(b"{\n  \"format\": 1,\n  \"name\": }").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_range_failure_prob() {
        let mut m = minimal();
        m.components[0].failure_prob = 1.5;
        let v = validate(&m);
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("c1"));
    }

    #[test]
    fn probability_sum_violation() {
        let mut m = minimal();
        m.scenarios[0].prob = 0.5;
        let mut s2 = m.scenarios[0].clone();
        s2.id = "s2".into();
        s2.prob = 0.6;
        m.scenarios.push(s2);
        assert_eq!(validate(&m), vec!["scenario probabilities sum to 1.1".to_string()]);
    }

    #[test]
    fn demands_sum_and_speed() {
        let mut m = minimal();
        m.components[0].operations.push(Operation {
            id: "o2".into(),
            demand: 0.3,
        });
        m.scenarios[0].steps.push(Step {
            operation_ref: "o2".into(),
            msg_size: 0.0,
        });
        let d = derive_demands(&m);
        assert!((d[0].per_node[0] - 0.5).abs() < 1e-15);
        m.nodes[0].speed_factor = 2.0;
        let d = derive_demands(&m);
        assert!((d[0].per_node[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn unknown_format_rejected() {
        let mut m = minimal();
        m.format = 7;
        assert!(matches!(
            load_model(serialize(&m).as_bytes()),
            Err(Error::Parse { .. })
        ));
    }
}
