//! Slow, direct reference implementations. Everything here works on plain
//! vectors or raw JSON so it shares no code with the library it checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// `a` dominates `b` when minimizing every coordinate.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut better = false;
    for i in 0..a.len() {
        if a[i] > b[i] {
            return false;
        }
        if a[i] < b[i] {
            better = true;
        }
    }
    better
}

/// Fronts by repeated peeling of the non-dominated remainder.
pub fn peel_fronts(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominates(&points[j], &points[i])))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Random mutually non-dominated points on a jittered simplex in `[0, 1]^d`.
pub fn random_front(rng: &mut ChaCha8Rng, dims: usize, max_points: usize) -> Vec<Vec<f64>> {
    let n = rng.random_range(1..=max_points);
    let mut pts: Vec<Vec<f64>> = Vec::new();
    while pts.len() < n {
        let raw: Vec<f64> = (0..dims).map(|_| rng.random::<f64>() + 1e-3).collect();
        let s: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|x| x / s).collect();
        if !pts.iter().any(|q| dominates(q, &p) || dominates(&p, q) || *q == p) {
            pts.push(p);
        }
    }
    pts
}

/// Karp–Luby Monte-Carlo estimate of the volume of the union of the boxes
/// `[p, reference]`.
pub fn monte_carlo_hypervolume(points: &[Vec<f64>], reference: &[f64], samples: usize, seed: u64) -> f64 {
    let boxes: Vec<&Vec<f64>> = points
        .iter()
        .filter(|p| p.iter().zip(reference).all(|(x, r)| x < r))
        .collect();
    if boxes.is_empty() {
        return 0.0;
    }
    let volumes: Vec<f64> = boxes
        .iter()
        .map(|p| p.iter().zip(reference).map(|(x, r)| r - x).product())
        .collect();
    let total: f64 = volumes.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    let mut x = vec![0.0; reference.len()];
    for _ in 0..samples {
        let mut pick = rng.random::<f64>() * total;
        let mut b = boxes.len() - 1;
        for (i, v) in volumes.iter().enumerate() {
            if pick < *v {
                b = i;
                break;
            }
            pick -= v;
        }
        for d in 0..reference.len() {
            x[d] = boxes[b][d] + rng.random::<f64>() * (reference[d] - boxes[b][d]);
        }
        let covering = boxes
            .iter()
            .filter(|p| p.iter().zip(&x).all(|(pi, xi)| pi <= xi))
            .count();
        acc += 1.0 / covering as f64;
    }
    total * acc / samples as f64
}

pub fn igd_plus(front: &[Vec<f64>], reference: &[Vec<f64>]) -> f64 {
    let mut sum = 0.0;
    for r in reference {
        let mut best = f64::INFINITY;
        for a in front {
            let mut s = 0.0;
            for d in 0..r.len() {
                let gap = if a[d] > r[d] { a[d] - r[d] } else { 0.0 };
                s += gap * gap;
            }
            best = best.min(s.sqrt());
        }
        sum += best;
    }
    sum / reference.len() as f64
}

/// Smallest shift such that every reference point is weakly dominated by a
/// shifted front point, computed from its definition for each candidate.
pub fn epsilon(front: &[Vec<f64>], reference: &[Vec<f64>]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for r in reference {
        let mut best = f64::INFINITY;
        for a in front {
            let mut need = f64::NEG_INFINITY;
            for d in 0..r.len() {
                need = need.max(a[d] - r[d]);
            }
            best = best.min(need);
        }
        worst = worst.max(best);
    }
    worst
}

pub fn coverage(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut covered = 0;
    for q in b {
        if a.iter().any(|p| (0..q.len()).all(|d| p[d] <= q[d])) {
            covered += 1;
        }
    }
    covered as f64 / b.len() as f64
}

/// A small valid model document with random annotations.
pub fn random_model_document(rng: &mut ChaCha8Rng) -> Value {
    let n_nodes = rng.random_range(1..=4);
    let n_comp = rng.random_range(1..=5);
    let nodes: Vec<Value> = (0..n_nodes)
        .map(|i| json!({ "id": format!("n{i}"), "speed_factor": rng.random_range(0.5..2.0) }))
        .collect();
    let mut ops = Vec::new();
    let components: Vec<Value> = (0..n_comp)
        .map(|i| {
            let operations: Vec<Value> = (0..rng.random_range(1..=3))
                .map(|j| {
                    let id = format!("c{i}_op{j}");
                    ops.push(id.clone());
                    json!({ "id": id, "demand": rng.random_range(0.001..0.1) })
                })
                .collect();
            json!({
                "id": format!("c{i}"),
                "operations": operations,
                "failure_prob": rng.random_range(0.0..0.05),
                "data_format": if rng.random_bool(0.5) { "json" } else { "xml" },
            })
        })
        .collect();
    let mut deployment = serde_json::Map::new();
    for i in 0..n_comp {
        deployment.insert(format!("c{i}"), json!(format!("n{}", rng.random_range(0..n_nodes))));
    }
    let mut links = Vec::new();
    for a in 0..n_nodes {
        for b in a + 1..n_nodes {
            if rng.random_bool(0.7) {
                links.push(json!({
                    "id": format!("l{}", links.len()),
                    "endpoints": [format!("n{a}"), format!("n{b}")],
                    "failure_prob": rng.random_range(0.0..0.01),
                }));
            }
        }
    }
    let n_scen = rng.random_range(1..=3);
    let weights: Vec<f64> = (0..n_scen).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let scenarios: Vec<Value> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let population: u32 = rng.random_range(1..=20);
            let think_time: f64 = rng.random_range(0.0..2.0);
            let steps: Vec<Value> = (0..rng.random_range(1..=6))
                .map(|_| {
                    json!({
                        "operation_ref": ops[rng.random_range(0..ops.len())],
                        "msg_size": rng.random_range(0.0..5.0),
                    })
                })
                .collect();
            json!({
                "id": format!("s{i}"),
                "prob": w / total,
                "population": population,
                "think_time": think_time,
                "steps": steps,
            })
        })
        .collect();
    json!({
        "format": 1,
        "name": "random",
        "components": components,
        "nodes": nodes,
        "links": links,
        "scenarios": scenarios,
        "deployment": deployment,
    })
}

/// θ_S evaluated step by step from a raw model document: every step
/// multiplies in its component's success probability and, when it moves
/// between nodes, the success probability of each connecting link raised
/// to the step's message size.
pub fn reliability_by_enumeration(model: &Value) -> f64 {
    let components = model["components"].as_array().unwrap();
    let links = model["links"].as_array().cloned().unwrap_or_default();
    let owner = |op: &str| {
        components
            .iter()
            .find(|c| {
                c["operations"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .any(|o| o["id"] == op)
            })
            .unwrap()
    };
    let mut success = 0.0;
    for s in model["scenarios"].as_array().unwrap() {
        let mut ok = 1.0;
        let mut prev_node: Option<String> = None;
        for step in s["steps"].as_array().unwrap() {
            let c = owner(step["operation_ref"].as_str().unwrap());
            ok *= 1.0 - c["failure_prob"].as_f64().unwrap();
            let node = model["deployment"][c["id"].as_str().unwrap()]
                .as_str()
                .unwrap()
                .to_string();
            if let Some(p) = &prev_node {
                if *p != node {
                    for l in &links {
                        let a = l["endpoints"][0].as_str().unwrap();
                        let b = l["endpoints"][1].as_str().unwrap();
                        if (a == p && b == node) || (b == p && a == node) {
                            let psi = l["failure_prob"].as_f64().unwrap();
                            ok *= (1.0 - psi).powf(step["msg_size"].as_f64().unwrap_or(0.0));
                        }
                    }
                }
            }
            prev_node = Some(node);
        }
        success += s["prob"].as_f64().unwrap() * ok;
    }
    1.0 - success
}

fn subsets(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), &mut visit);
}

/// Two-sided Mann–Whitney p by listing every assignment of the pooled
/// values to the first sample.
pub fn mann_whitney_enumerated(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let rank = |i: usize| {
        let less = pooled.iter().filter(|&&v| v < pooled[i]).count() as f64;
        let equal = pooled.iter().filter(|&&v| v == pooled[i]).count() as f64;
        less + (equal + 1.0) / 2.0
    };
    let ranks: Vec<f64> = (0..n).map(rank).collect();
    let observed: f64 = ranks[..a.len()].iter().sum();
    let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
    subsets(n, a.len(), |s| {
        let w: f64 = s.iter().map(|&i| ranks[i]).sum();
        total += 1;
        if w <= observed + 1e-9 {
            le += 1;
        }
        if w >= observed - 1e-9 {
            ge += 1;
        }
    });
    (2.0 * le.min(ge) as f64 / total as f64).min(1.0)
}

pub fn a12(a: &[f64], b: &[f64]) -> f64 {
    let mut score = 0.0;
    for x in a {
        for y in b {
            score += if x > y {
                1.0
            } else if x == y {
                0.5
            } else {
                0.0
            };
        }
    }
    score / (a.len() * b.len()) as f64
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Columns rescaled to zero mean and unit population variance; constant
/// columns removed.
pub fn standardize(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = points.len() as f64;
    let dims = points.first().map_or(0, Vec::len);
    let mut keep = Vec::new();
    for d in 0..dims {
        let mean = points.iter().map(|p| p[d]).sum::<f64>() / n;
        let var = points.iter().map(|p| (p[d] - mean).powi(2)).sum::<f64>() / n;
        if var > 0.0 {
            keep.push((d, mean, var.sqrt()));
        }
    }
    points
        .iter()
        .map(|p| keep.iter().map(|&(d, m, s)| (p[d] - m) / s).collect())
        .collect()
}

/// Silhouette from its definition; singleton members score 0.
pub fn silhouette(points: &[Vec<f64>], assign: &[usize]) -> f64 {
    let n = points.len();
    let clusters: Vec<usize> = {
        let mut c = assign.to_vec();
        c.sort_unstable();
        c.dedup();
        c
    };
    let mut total = 0.0;
    for i in 0..n {
        let mean_to = |c: usize| {
            let others: Vec<usize> = (0..n).filter(|&j| j != i && assign[j] == c).collect();
            others.iter().map(|&j| euclid(&points[i], &points[j])).sum::<f64>() / others.len() as f64
        };
        if assign.iter().filter(|&&c| c == assign[i]).count() == 1 {
            continue;
        }
        let a = mean_to(assign[i]);
        let b = clusters
            .iter()
            .filter(|&&c| c != assign[i])
            .map(|&c| {
                let members: Vec<usize> = (0..n).filter(|&j| assign[j] == c).collect();
                members.iter().map(|&j| euclid(&points[i], &points[j])).sum::<f64>() / members.len() as f64
            })
            .fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        if m > 0.0 && b.is_finite() {
            total += (b - a) / m;
        }
    }
    total / n as f64
}

/// The medoid sets of size `k` with minimal total distance to the nearest
/// medoid, by exhaustive search.
pub fn best_medoid_sets(points: &[Vec<f64>], k: usize) -> Vec<Vec<usize>> {
    let mut best = f64::INFINITY;
    let mut sets = Vec::new();
    subsets(points.len(), k, |s| {
        let cost: f64 = points
            .iter()
            .map(|p| s.iter().map(|&m| euclid(p, &points[m])).fold(f64::INFINITY, f64::min))
            .sum();
        if cost < best - 1e-12 {
            best = cost;
            sets = vec![s.to_vec()];
        } else if (cost - best).abs() <= 1e-12 {
            sets.push(s.to_vec());
        }
    });
    sets
}

/// True when no member of any cluster has a strictly smaller mean distance
/// to its cluster than that cluster's medoid.
pub fn medoids_optimal(dist: impl Fn(usize, usize) -> f64, assign: &[usize], medoids: &[usize]) -> bool {
    medoids.iter().enumerate().all(|(c, &m)| {
        let members: Vec<usize> = (0..assign.len()).filter(|&i| assign[i] == c).collect();
        if !members.contains(&m) {
            return false;
        }
        let mean = |x: usize| members.iter().map(|&o| dist(x, o)).sum::<f64>() / members.len() as f64;
        let mm = mean(m);
        members.iter().all(|&o| mean(o) >= mm - 1e-12)
    })
}
