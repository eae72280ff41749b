//! Refactoring actions over architecture models, feasibility checks and the
//! BRF x AW cost model.
//!
//! Actions are pure: they take a model by reference and return a new one.
//! Identifiers of created elements are derived from the model state alone
//! (smallest unused numeric suffix), so equal chromosomes always produce
//! equal phenotypes.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ArchitectureModel, Component, Link, ProcNode};

#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActionKind {
    ReDe,
    MO2C,
    Clon,
    MO2N,
}

impl ActionKind {
    pub const ALL: [ActionKind; 4] = [
        ActionKind::ReDe,
        ActionKind::MO2C,
        ActionKind::Clon,
        ActionKind::MO2N,
    ];
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One gene of the chromosome.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RefactoringAction {
    /// Redeploy a component on a new node linked to all neighbors of its host.
    ReDe { component: String },
    /// Move an operation to another existing component.
    MO2C { operation: String, target: String },
    /// Clone a node into its replica group.
    Clon { node: String },
    /// Move an operation to a new component on a new node.
    MO2N { operation: String },
}

impl RefactoringAction {
    pub fn kind(&self) -> ActionKind {
        match self {
            RefactoringAction::ReDe { .. } => ActionKind::ReDe,
            RefactoringAction::MO2C { .. } => ActionKind::MO2C,
            RefactoringAction::Clon { .. } => ActionKind::Clon,
            RefactoringAction::MO2N { .. } => ActionKind::MO2N,
        }
    }

    /// The model element the action's architectural weight is taken from.
    pub fn target_element(&self) -> ElementRef {
        match self {
            RefactoringAction::ReDe { component } => ElementRef::Component(component.clone()),
            RefactoringAction::MO2C { operation, .. } | RefactoringAction::MO2N { operation } => {
                ElementRef::Operation(operation.clone())
            }
            RefactoringAction::Clon { node } => ElementRef::Node(node.clone()),
        }
    }
}

impl fmt::Display for RefactoringAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefactoringAction::ReDe { component } => write!(f, "ReDe({component})"),
            RefactoringAction::MO2C { operation, target } => {
                write!(f, "MO2C({operation}->{target})")
            }
            RefactoringAction::Clon { node } => write!(f, "Clon({node})"),
            RefactoringAction::MO2N { operation } => write!(f, "MO2N({operation})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RefactoringSequence {
    pub actions: Vec<RefactoringAction>,
    #[serde(default)]
    pub frozen_prefix_len: usize,
}

impl RefactoringSequence {
    pub fn new(actions: Vec<RefactoringAction>) -> Self {
        Self {
            actions,
            frozen_prefix_len: 0,
        }
    }

    pub fn frozen(actions: Vec<RefactoringAction>) -> Self {
        let frozen_prefix_len = actions.len();
        Self {
            actions,
            frozen_prefix_len,
        }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn prefix(&self) -> &[RefactoringAction] {
        &self.actions[..self.frozen_prefix_len]
    }

    pub fn suffix(&self) -> &[RefactoringAction] {
        &self.actions[self.frozen_prefix_len..]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AwWeights {
    pub component: f64,
    pub operation: f64,
    pub node: f64,
}

impl Default for AwWeights {
    fn default() -> Self {
        Self {
            component: 1.0,
            operation: 1.0,
            node: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostParams {
    pub brf: BTreeMap<ActionKind, f64>,
    pub aw_weights: AwWeights,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            brf: [
                (ActionKind::ReDe, 1.2),
                (ActionKind::Clon, 1.0),
                (ActionKind::MO2C, 1.5),
                (ActionKind::MO2N, 2.0),
            ]
            .into(),
            aw_weights: AwWeights::default(),
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        for kind in ActionKind::ALL {
            match self.brf.get(&kind) {
                Some(v) if *v > 0.0 && v.is_finite() => {}
                Some(v) => {
                    return Err(Error::Config(format!("brf for {kind} must be > 0, got {v}")))
                }
                None => return Err(Error::Config(format!("brf for {kind} is missing"))),
            }
        }
        Ok(())
    }

    pub fn brf_of(&self, kind: ActionKind) -> f64 {
        self.brf.get(&kind).copied().unwrap_or(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "id", rename_all = "lowercase")]
pub enum ElementRef {
    Component(String),
    Operation(String),
    Node(String),
}

/// Checks an action's preconditions against `model`.
pub fn check_feasible(model: &ArchitectureModel, action: &RefactoringAction) -> Result<()> {
    let fail = |msg: String| Err(Error::Precondition(msg));
    match action {
        RefactoringAction::ReDe { component } => {
            if model.component(component).is_none() {
                return fail(format!("ReDe: component '{component}' does not exist"));
            }
        }
        RefactoringAction::MO2C { operation, target } => {
            let Some(owner) = model.owner_index(operation) else {
                return fail(format!("MO2C: operation '{operation}' does not exist"));
            };
            if model.component(target).is_none() {
                return fail(format!("MO2C: target component '{target}' does not exist"));
            }
            if &model.components[owner].id == target {
                return fail(format!(
                    "MO2C: operation '{operation}' already belongs to '{target}'"
                ));
            }
        }
        RefactoringAction::Clon { node } => {
            if model.node(node).is_none() {
                return fail(format!("Clon: node '{node}' does not exist"));
            }
        }
        RefactoringAction::MO2N { operation } => {
            if model.owner_index(operation).is_none() {
                return fail(format!("MO2N: operation '{operation}' does not exist"));
            }
        }
    }
    Ok(())
}

pub fn is_feasible(model: &ArchitectureModel, action: &RefactoringAction) -> bool {
    check_feasible(model, action).is_ok()
}

/// Failure probability given to links created by ReDe and MO2N: the mean of
/// the existing links, or 0 without links.
pub fn default_link_failure(model: &ArchitectureModel) -> f64 {
    if model.links.is_empty() {
        0.0
    } else {
        model.links.iter().map(|l| l.failure_prob).sum::<f64>() / model.links.len() as f64
    }
}

fn fresh_id(taken: impl Fn(&str) -> bool, base: &str) -> String {
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|id| !taken(id))
        .expect("unbounded suffix search")
}

fn fresh_node_id(model: &ArchitectureModel, base: &str) -> String {
    fresh_id(|id| model.node(id).is_some(), base)
}

fn fresh_link_id(model: &ArchitectureModel, a: &str, b: &str) -> String {
    fresh_id(
        |id| model.links.iter().any(|l| l.id == id),
        &format!("l_{a}_{b}_"),
    )
}

fn neighbors(model: &ArchitectureModel, node: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for l in &model.links {
        if let Some(other) = l.other_end(node) {
            if !out.iter().any(|o| o == other) {
                out.push(other.to_string());
            }
        }
    }
    out
}

fn add_link(model: &mut ArchitectureModel, a: &str, b: &str, failure_prob: f64) {
    let id = fresh_link_id(model, a, b);
    model.links.push(Link {
        id,
        endpoints: (a.to_string(), b.to_string()),
        failure_prob,
    });
}

/// Apply one action, returning the refactored model. The input is untouched.
pub fn apply_action(
    model: &ArchitectureModel,
    action: &RefactoringAction,
) -> Result<ArchitectureModel> {
    check_feasible(model, action)?;
    let mut out = model.clone();
    match action {
        RefactoringAction::ReDe { component } => {
            let host = out.deployment[component].clone();
            let speed = out.node(&host).map(|n| n.speed_factor).unwrap_or(1.0);
            let psi = default_link_failure(model);
            let new_node = fresh_node_id(&out, &format!("{component}_rd"));
            let nbrs = neighbors(&out, &host);
            out.nodes.push(ProcNode {
                id: new_node.clone(),
                speed_factor: speed,
                replica_group: None,
            });
            for nb in nbrs {
                add_link(&mut out, &new_node, &nb, psi);
            }
            out.deployment.insert(component.clone(), new_node);
        }
        RefactoringAction::MO2C { operation, target } => {
            let owner = out.owner_index(operation).expect("checked");
            let pos = out.components[owner]
                .operations
                .iter()
                .position(|o| &o.id == operation)
                .expect("checked");
            let op = out.components[owner].operations.remove(pos);
            let t = out
                .components
                .iter_mut()
                .find(|c| &c.id == target)
                .expect("checked");
            t.operations.push(op);
        }
        RefactoringAction::Clon { node } => {
            let idx = out.node_index(node).expect("checked");
            let group = out.nodes[idx]
                .replica_group
                .clone()
                .unwrap_or_else(|| node.clone());
            out.nodes[idx].replica_group = Some(group.clone());
            let speed = out.nodes[idx].speed_factor;
            let new_node = fresh_node_id(&out, &format!("{group}_r"));
            let copied: Vec<(String, f64)> = out
                .links
                .iter()
                .filter_map(|l| l.other_end(node).map(|o| (o.to_string(), l.failure_prob)))
                .collect();
            out.nodes.push(ProcNode {
                id: new_node.clone(),
                speed_factor: speed,
                replica_group: Some(group),
            });
            for (other, psi) in copied {
                add_link(&mut out, &new_node, &other, psi);
            }
        }
        RefactoringAction::MO2N { operation } => {
            let owner = out.owner_index(operation).expect("checked");
            let owner_id = out.components[owner].id.clone();
            let host = out.deployment[&owner_id].clone();
            let speed = out.node(&host).map(|n| n.speed_factor).unwrap_or(1.0);
            let psi = default_link_failure(model);
            let pos = out.components[owner]
                .operations
                .iter()
                .position(|o| &o.id == operation)
                .expect("checked");
            let op = out.components[owner].operations.remove(pos);
            let new_comp = fresh_id(|id| out.component(id).is_some(), &format!("{operation}_c"));
            let new_node = fresh_node_id(&out, &format!("{operation}_n"));
            let (failure_prob, data_format) = {
                let c = &out.components[owner];
                (c.failure_prob, c.data_format.clone())
            };
            out.components.push(Component {
                id: new_comp.clone(),
                operations: vec![op],
                failure_prob,
                data_format,
            });
            out.nodes.push(ProcNode {
                id: new_node.clone(),
                speed_factor: speed,
                replica_group: None,
            });
            add_link(&mut out, &new_node, &host, psi);
            out.deployment.insert(new_comp, new_node);
        }
    }
    Ok(out)
}

/// Left fold of [`apply_action`]; errors carry the failing position.
pub fn apply_sequence(
    model: &ArchitectureModel,
    seq: &RefactoringSequence,
) -> Result<ArchitectureModel> {
    apply_actions(model, &seq.actions)
}

pub fn apply_actions(
    model: &ArchitectureModel,
    actions: &[RefactoringAction],
) -> Result<ArchitectureModel> {
    let mut current = model.clone();
    for (position, action) in actions.iter().enumerate() {
        current = apply_action(&current, action).map_err(|e| Error::InfeasibleAt {
            position,
            reason: e.to_string(),
        })?;
    }
    Ok(current)
}

/// Kinds with at least one feasible parameterization on `model`.
pub fn feasible_kinds(model: &ArchitectureModel) -> Vec<ActionKind> {
    let ops = model.operation_count();
    ActionKind::ALL
        .into_iter()
        .filter(|k| match k {
            ActionKind::ReDe => !model.components.is_empty(),
            ActionKind::MO2C => ops > 0 && model.components.len() >= 2,
            ActionKind::Clon => !model.nodes.is_empty(),
            ActionKind::MO2N => ops > 0,
        })
        .collect()
}

/// Draws a kind uniformly among feasible kinds, then parameters uniformly.
pub fn random_feasible_action<R: Rng + ?Sized>(
    model: &ArchitectureModel,
    rng: &mut R,
) -> Result<RefactoringAction> {
    let kinds = feasible_kinds(model);
    if kinds.is_empty() {
        return Err(Error::Exhausted);
    }
    let kind = kinds[rng.random_range(0..kinds.len())];
    let all_ops: Vec<(usize, &str)> = model
        .components
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| c.operations.iter().map(move |o| (ci, o.id.as_str())))
        .collect();
    let action = match kind {
        ActionKind::ReDe => {
            let c = &model.components[rng.random_range(0..model.components.len())];
            RefactoringAction::ReDe {
                component: c.id.clone(),
            }
        }
        ActionKind::MO2C => {
            let (owner, op) = all_ops[rng.random_range(0..all_ops.len())];
            let mut t = rng.random_range(0..model.components.len() - 1);
            if t >= owner {
                t += 1;
            }
            RefactoringAction::MO2C {
                operation: op.to_string(),
                target: model.components[t].id.clone(),
            }
        }
        ActionKind::Clon => {
            let n = &model.nodes[rng.random_range(0..model.nodes.len())];
            RefactoringAction::Clon { node: n.id.clone() }
        }
        ActionKind::MO2N => {
            let (_, op) = all_ops[rng.random_range(0..all_ops.len())];
            RefactoringAction::MO2N {
                operation: op.to_string(),
            }
        }
    };
    debug_assert!(is_feasible(model, &action));
    Ok(action)
}

/// Effort weight of a model element.
///
/// - component: `1 + #operations + #steps invoking its operations`
/// - operation: `1 + #steps invoking it`
/// - node: `1 + #deployed components + #incident links`
///
/// each scaled by the matching entry of `weights`.
pub fn architectural_weight(
    model: &ArchitectureModel,
    element: &ElementRef,
    weights: &AwWeights,
) -> Result<f64> {
    let steps = || model.scenarios.iter().flat_map(|s| s.steps.iter());
    match element {
        ElementRef::Component(id) => {
            let c = model
                .component(id)
                .ok_or_else(|| Error::UnknownElement(id.clone()))?;
            let touching = steps()
                .filter(|st| c.operations.iter().any(|o| o.id == st.operation_ref))
                .count();
            Ok(weights.component * (1 + c.operations.len() + touching) as f64)
        }
        ElementRef::Operation(id) => {
            if model.owner_index(id).is_none() {
                return Err(Error::UnknownElement(id.clone()));
            }
            let invoking = steps().filter(|st| &st.operation_ref == id).count();
            Ok(weights.operation * (1 + invoking) as f64)
        }
        ElementRef::Node(id) => {
            if model.node(id).is_none() {
                return Err(Error::UnknownElement(id.clone()));
            }
            let deployed = model.deployment.values().filter(|n| *n == id).count();
            let links = model.links.iter().filter(|l| l.touches(id)).count();
            Ok(weights.node * (1 + deployed + links) as f64)
        }
    }
}

/// Cost of one action against the model it is applied to.
pub fn action_cost(
    model: &ArchitectureModel,
    action: &RefactoringAction,
    params: &CostParams,
) -> Result<f64> {
    let aw = architectural_weight(model, &action.target_element(), &params.aw_weights)?;
    Ok(params.brf_of(action.kind()) * aw)
}

/// Σ BRF(kind) × AW(element), each AW taken on the intermediate model just
/// before the action is applied.
pub fn sequence_cost(
    model: &ArchitectureModel,
    seq: &RefactoringSequence,
    params: &CostParams,
) -> Result<f64> {
    replay_with_cost(model, &seq.actions, params).map(|(_, c)| c)
}

/// Apply `actions` and accumulate their cost in one pass.
pub fn replay_with_cost(
    model: &ArchitectureModel,
    actions: &[RefactoringAction],
    params: &CostParams,
) -> Result<(ArchitectureModel, f64)> {
    let mut current = model.clone();
    let mut cost = 0.0;
    for (position, action) in actions.iter().enumerate() {
        let wrap = |e: Error| Error::InfeasibleAt {
            position,
            reason: e.to_string(),
        };
        check_feasible(&current, action).map_err(wrap)?;
        cost += action_cost(&current, action, params).map_err(wrap)?;
        current = apply_action(&current, action).map_err(wrap)?;
    }
    Ok((current, cost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, Operation, Scenario, Step};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn comp(id: &str, ops: &[(&str, f64)]) -> Component {
        Component {
            id: id.into(),
            operations: ops
                .iter()
                .map(|(o, d)| Operation {
                    id: (*o).into(),
                    demand: *d,
                })
                .collect(),
            failure_prob: 0.01,
            data_format: "json".into(),
        }
    }

    fn node(id: &str) -> ProcNode {
        ProcNode {
            id: id.into(),
            speed_factor: 1.0,
            replica_group: None,
        }
    }

    fn link(id: &str, a: &str, b: &str) -> Link {
        Link {
            id: id.into(),
            endpoints: (a.into(), b.into()),
            failure_prob: 0.001,
        }
    }

    fn two_component_model() -> ArchitectureModel {
        ArchitectureModel {
            format: 1,
            name: "two".into(),
            components: vec![comp("c1", &[("o1", 0.2)]), comp("c2", &[("o2", 0.3)])],
            nodes: vec![node("n1"), node("n2")],
            links: vec![link("l1", "n1", "n2")],
            scenarios: vec![Scenario {
                id: "s".into(),
                prob: 1.0,
                population: 3,
                think_time: 1.0,
                steps: vec![
                    Step {
                        operation_ref: "o1".into(),
                        msg_size: 1.0,
                    },
                    Step {
                        operation_ref: "o2".into(),
                        msg_size: 2.0,
                    },
                ],
            }],
            deployment: [("c1".into(), "n1".into()), ("c2".into(), "n2".into())].into(),
        }
    }

    #[test]
    fn mo2c_moves_ownership() {
        let m = two_component_model();
        let out = apply_action(
            &m,
            &RefactoringAction::MO2C {
                operation: "o1".into(),
                target: "c2".into(),
            },
        )
        .unwrap();
        assert!(out.component("c2").unwrap().operations.iter().any(|o| o.id == "o1"));
        assert!(out.component("c1").unwrap().operations.is_empty());
        let d = crate::model::derive_demands(&out);
        assert!((d[0].per_node[1] - 0.5).abs() < 1e-15);
        assert_eq!(d[0].per_node[0], 0.0);
        assert!(validate(&out).is_empty());
    }

    #[test]
    fn clon_builds_replica_group() {
        let m = two_component_model();
        let out = apply_action(&m, &RefactoringAction::Clon { node: "n1".into() }).unwrap();
        let clone = out.node("n1_r1").expect("clone created");
        assert_eq!(clone.replica_group.as_deref(), Some("n1"));
        assert_eq!(out.node("n1").unwrap().replica_group.as_deref(), Some("n1"));
        assert!(out.links.iter().any(|l| l.connects("n1_r1", "n2")));
        assert_eq!(out.links.len(), 2);
        let members: Vec<&str> = out
            .replica_members("n1")
            .into_iter()
            .map(|i| out.nodes[i].id.as_str())
            .collect();
        assert_eq!(members, ["n1", "n1_r1"]);

        let again = apply_action(&out, &RefactoringAction::Clon { node: "n1_r1".into() }).unwrap();
        assert!(again.node("n1_r2").is_some());
        assert_eq!(again.replica_members("n1").len(), 3);
    }

    #[test]
    fn rede_links_every_neighbor() {
        let mut m = two_component_model();
        m.nodes.extend([node("n3"), node("n4")]);
        m.links.push(link("l2", "n3", "n1"));
        m.links.push(link("l3", "n1", "n4"));
        let before_neighbors = neighbors(&m, "n1");
        assert_eq!(before_neighbors.len(), 3);
        let out = apply_action(
            &m,
            &RefactoringAction::ReDe {
                component: "c1".into(),
            },
        )
        .unwrap();
        let host = out.host_of("c1").unwrap().to_string();
        assert_ne!(host, "n1");
        let new_links: Vec<_> = out.links.iter().filter(|l| l.touches(&host)).collect();
        assert_eq!(new_links.len(), 3);
        for nb in &before_neighbors {
            assert!(new_links.iter().any(|l| l.connects(&host, nb)));
        }
        assert_eq!(out.components.len(), m.components.len());
        assert_eq!(out.links.len(), m.links.len() + 3);
        assert!(validate(&out).is_empty());
    }

    #[test]
    fn mo2n_creates_component_and_node() {
        let m = two_component_model();
        let out = apply_action(
            &m,
            &RefactoringAction::MO2N {
                operation: "o2".into(),
            },
        )
        .unwrap();
        assert_eq!(out.components.len(), 3);
        assert_eq!(out.nodes.len(), 3);
        let (c, _) = out.operation("o2").unwrap();
        let host = out.host_of(&c.id).unwrap();
        assert!(out.links.iter().any(|l| l.connects(host, "n2")));
        assert!(validate(&out).is_empty());
    }

    #[test]
    fn precondition_errors() {
        let m = two_component_model();
        let bad = RefactoringAction::MO2C {
            operation: "o1".into(),
            target: "c1".into(),
        };
        assert!(matches!(apply_action(&m, &bad), Err(Error::Precondition(_))));
        let seq = RefactoringSequence::new(vec![
            RefactoringAction::Clon { node: "n1".into() },
            RefactoringAction::Clon { node: "zz".into() },
        ]);
        assert!(matches!(
            apply_sequence(&m, &seq),
            Err(Error::InfeasibleAt { position: 1, .. })
        ));
    }

    #[test]
    fn empty_sequence_is_identity() {
        let m = two_component_model();
        assert_eq!(apply_sequence(&m, &RefactoringSequence::default()).unwrap(), m);
        assert_eq!(
            sequence_cost(&m, &RefactoringSequence::default(), &CostParams::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn mo2c_round_trip() {
        let m = two_component_model();
        let seq = RefactoringSequence::new(vec![
            RefactoringAction::MO2C {
                operation: "o1".into(),
                target: "c2".into(),
            },
            RefactoringAction::MO2C {
                operation: "o1".into(),
                target: "c1".into(),
            },
        ]);
        assert_eq!(apply_sequence(&m, &seq).unwrap(), m);
    }

    #[test]
    fn single_component_model_never_draws_mo2c() {
        let mut m = two_component_model();
        m.components.truncate(1);
        m.deployment.remove("c2");
        m.scenarios[0].steps.truncate(1);
        m.nodes.truncate(1);
        m.links.clear();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let a = random_feasible_action(&m, &mut rng).unwrap();
            assert_ne!(a.kind(), ActionKind::MO2C);
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        let m = two_component_model();
        let a = random_feasible_action(&m, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = random_feasible_action(&m, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn architectural_weights() {
        let mut m = two_component_model();
        // c1: 2 operations, 3 steps touching it.
        m.components[0].operations.push(Operation {
            id: "o3".into(),
            demand: 0.1,
        });
        m.scenarios[0].steps.push(Step {
            operation_ref: "o3".into(),
            msg_size: 0.0,
        });
        m.scenarios[0].steps.push(Step {
            operation_ref: "o1".into(),
            msg_size: 0.0,
        });
        let w = AwWeights::default();
        let aw = |e| architectural_weight(&m, &e, &w).unwrap();
        assert_eq!(aw(ElementRef::Component("c1".into())), 6.0);

        m.components[1].operations.push(Operation {
            id: "idle".into(),
            demand: 0.1,
        });
        assert_eq!(
            architectural_weight(&m, &ElementRef::Operation("idle".into()), &w).unwrap(),
            1.0
        );

        m.deployment.insert("c2".into(), "n1".into());
        m.nodes.push(node("n3"));
        m.links.push(link("l9", "n1", "n3"));
        assert_eq!(
            architectural_weight(&m, &ElementRef::Node("n1".into()), &w).unwrap(),
            5.0
        );
        assert!(matches!(
            architectural_weight(&m, &ElementRef::Node("nope".into()), &w),
            Err(Error::UnknownElement(_))
        ));
    }

    #[test]
    fn cost_is_sum_of_products() {
        // Clon(n2): node n2 has 1 component + 1 link -> AW 3.
        // MO2C(o1 -> c2) on the result: o1 invoked once -> AW 2.
        let m = two_component_model();
        let mut params = CostParams::default();
        params.brf.insert(ActionKind::MO2C, 1.5);
        params.brf.insert(ActionKind::Clon, 1.0);
        let one = RefactoringSequence::new(vec![RefactoringAction::MO2C {
            operation: "o1".into(),
            target: "c2".into(),
        }]);
        assert_eq!(sequence_cost(&m, &one, &params).unwrap(), 3.0);
        let two = RefactoringSequence::new(vec![
            RefactoringAction::MO2C {
                operation: "o1".into(),
                target: "c2".into(),
            },
            RefactoringAction::Clon { node: "n2".into() },
        ]);
        // n2 after the move: 1 component + 1 link -> AW 3, BRF 1.0.
        assert_eq!(sequence_cost(&m, &two, &params).unwrap(), 6.0);
    }

    #[test]
    fn action_serialization_is_tagged() {
        let a = RefactoringAction::MO2C {
            operation: "o1".into(),
            target: "c2".into(),
        };
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"kind":"MO2C","operation":"o1","target":"c2"}"#);
    }
}
