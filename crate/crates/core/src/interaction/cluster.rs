//! k-medoids over standardized objective vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::labels::{discretize_with, Discretization, OrdinalLabel};
use crate::evaluation::ObjectiveVector;
use crate::optimizer::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusterConfig {
    /// Fixed cluster count; when unset, k is chosen by silhouette.
    pub k: Option<usize>,
    pub k_max: usize,
    pub seed: u64,
    pub discretization: Discretization,
    /// Cluster every feasible archived solution instead of the front only.
    pub full_archive: bool,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            k: None,
            k_max: 8,
            seed: 0,
            discretization: Discretization::EqualWidth,
            full_archive: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub k: usize,
    /// Cluster of each clustered solution.
    pub assignments: Vec<usize>,
    /// Solution index of each cluster's medoid.
    pub medoids: Vec<usize>,
    pub silhouette: f64,
    /// Label of each clustered solution.
    pub point_labels: Vec<OrdinalLabel>,
    /// Label of each cluster's medoid.
    pub labels: Vec<OrdinalLabel>,
}

impl ClusterSet {
    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == cluster)
            .collect()
    }
}

/// Zero mean, unit population variance per column; constant columns are
/// dropped.
pub fn standardize(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let dims = points[0].len();
    let mut out = vec![Vec::new(); n];
    for d in 0..dims {
        let mean = points.iter().map(|p| p[d]).sum::<f64>() / n as f64;
        let var = points.iter().map(|p| (p[d] - mean).powi(2)).sum::<f64>() / n as f64;
        let sd = var.sqrt();
        if !(sd > 0.0) {
            continue;
        }
        for (o, p) in out.iter_mut().zip(points) {
            o.push((p[d] - mean) / sd);
        }
    }
    out
}

pub fn pairwise_distances(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let dist = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            d[i][j] = dist;
            d[j][i] = dist;
        }
    }
    d
}

/// Index (within `members`) of the member with the least total
/// dissimilarity to the others; ties go to the earliest member.
pub fn medoid_of(dist: &[Vec<f64>], members: &[usize]) -> usize {
    let mut best = (members[0], f64::INFINITY);
    for &m in members {
        let total: f64 = members.iter().map(|&o| dist[m][o]).sum();
        if total < best.1 {
            best = (m, total);
        }
    }
    best.0
}

fn assign(dist: &[Vec<f64>], medoids: &[usize]) -> Vec<usize> {
    let mut a: Vec<usize> = (0..dist.len())
        .map(|i| {
            let mut best = 0;
            for c in 1..medoids.len() {
                if dist[i][medoids[c]] < dist[i][medoids[best]] {
                    best = c;
                }
            }
            best
        })
        .collect();
    for (c, &m) in medoids.iter().enumerate() {
        a[m] = c;
    }
    a
}

fn total_cost(dist: &[Vec<f64>], medoids: &[usize]) -> f64 {
    (0..dist.len())
        .map(|i| medoids.iter().map(|&m| dist[i][m]).fold(f64::INFINITY, f64::min))
        .sum()
}

fn seed_medoids(dist: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = dist.len();
    let mut medoids = vec![rng.random_range(0..n)];
    while medoids.len() < k {
        let weights: Vec<f64> = (0..n)
            .map(|i| {
                let d = medoids.iter().map(|&m| dist[i][m]).fold(f64::INFINITY, f64::min);
                d * d
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, w) in weights.iter().enumerate() {
                if *w > 0.0 && target < *w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            while weights[pick] == 0.0 {
                pick -= 1;
            }
            pick
        } else {
            (0..n).find(|i| !medoids.contains(i)).unwrap()
        };
        medoids.push(next);
    }
    medoids
}

/// PAM with greedy-swap refinement. Returns `(assignments, medoids)`; each
/// medoid minimizes total dissimilarity within its final cluster.
pub fn k_medoids(dist: &[Vec<f64>], k: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let n = dist.len();
    assert!(k >= 1 && k <= n, "k must be in 1..=n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut medoids = seed_medoids(dist, k, &mut rng);
    let mut cost = total_cost(dist, &medoids);
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for c in 0..k {
            for o in 0..n {
                if medoids.contains(&o) {
                    continue;
                }
                let mut trial = medoids.clone();
                trial[c] = o;
                let t = total_cost(dist, &trial);
                if t < cost - 1e-12 && best.is_none_or(|b| t < b.2) {
                    best = Some((c, o, t));
                }
            }
        }
        match best {
            Some((c, o, t)) => {
                medoids[c] = o;
                cost = t;
            }
            None => break,
        }
    }

    let mut assignments = assign(dist, &medoids);
    for _ in 0..100 {
        let refined: Vec<usize> = (0..k)
            .map(|c| {
                let members: Vec<usize> = (0..n).filter(|&i| assignments[i] == c).collect();
                let m = medoid_of(dist, &members);
                let keep: f64 = members.iter().map(|&o| dist[medoids[c]][o]).sum();
                let new: f64 = members.iter().map(|&o| dist[m][o]).sum();
                if new < keep {
                    m
                } else {
                    medoids[c]
                }
            })
            .collect();
        if refined == medoids {
            break;
        }
        medoids = refined;
        assignments = assign(dist, &medoids);
    }
    for c in 0..k {
        let members: Vec<usize> = (0..n).filter(|&i| assignments[i] == c).collect();
        let keep: f64 = members.iter().map(|&o| dist[medoids[c]][o]).sum();
        let m = medoid_of(dist, &members);
        if members.iter().map(|&o| dist[m][o]).sum::<f64>() < keep {
            medoids[c] = m;
        }
    }
    (assignments, medoids)
}

/// Mean silhouette; singleton clusters contribute 0.
pub fn silhouette(assignments: &[usize], dist: &[Vec<f64>]) -> f64 {
    let n = assignments.len();
    if n == 0 {
        return 0.0;
    }
    let k = assignments.iter().max().map_or(0, |m| m + 1);
    let sizes: Vec<usize> = (0..k).map(|c| assignments.iter().filter(|&&a| a == c).count()).collect();
    let mut sum = 0.0;
    for i in 0..n {
        let own = assignments[i];
        if sizes[own] <= 1 {
            continue;
        }
        let mut totals = vec![0.0; k];
        for j in 0..n {
            if j != i {
                totals[assignments[j]] += dist[i][j];
            }
        }
        let a = totals[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| totals[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        if !b.is_finite() {
            continue;
        }
        let m = a.max(b);
        if m > 0.0 {
            sum += (b - a) / m;
        }
    }
    sum / n as f64
}

/// Clusters `front`. Cluster ids are ordered by medoid perfq, best first.
pub fn cluster_front(front: &[ObjectiveVector], config: &ClusterConfig) -> ClusterSet {
    let n = front.len();
    let point_labels = discretize_with(front, config.discretization);
    if n == 0 {
        return ClusterSet {
            k: 0,
            assignments: vec![],
            medoids: vec![],
            silhouette: 0.0,
            point_labels,
            labels: vec![],
        };
    }
    let raw: Vec<Vec<f64>> = front.iter().map(|v| v.as_array().to_vec()).collect();
    let dist = pairwise_distances(&standardize(&raw));
    let distinct = {
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n {
            if reps.iter().all(|&r| dist[i][r] > 0.0) {
                reps.push(i);
            }
        }
        reps.len()
    };

    let candidates: Vec<usize> = match config.k {
        Some(k) => vec![k.min(distinct)],
        None => (2..=config.k_max.min(n.saturating_sub(1)).min(distinct)).collect(),
    };
    let mut best: Option<(Vec<usize>, Vec<usize>, f64)> = None;
    for k in candidates.into_iter().filter(|&k| k >= 2) {
        let (a, m) = k_medoids(&dist, k, derive_seed(config.seed, &[k as u64]));
        let s = silhouette(&a, &dist);
        if best.as_ref().is_none_or(|b| s > b.2) {
            best = Some((a, m, s));
        }
    }
    let (assignments, medoids, silhouette) = best.unwrap_or_else(|| {
        let all: Vec<usize> = (0..n).collect();
        (vec![0; n], vec![medoid_of(&dist, &all)], 0.0)
    });

    let mut order: Vec<usize> = (0..medoids.len()).collect();
    order.sort_by(|&a, &b| {
        front[medoids[b]]
            .perfq
            .total_cmp(&front[medoids[a]].perfq)
            .then(medoids[a].cmp(&medoids[b]))
    });
    let mut rename = vec![0; medoids.len()];
    for (new, &old) in order.iter().enumerate() {
        rename[old] = new;
    }
    let medoids: Vec<usize> = order.iter().map(|&c| medoids[c]).collect();
    let assignments: Vec<usize> = assignments.iter().map(|&c| rename[c]).collect();
    let labels = medoids.iter().map(|&m| point_labels[m]).collect();
    ClusterSet {
        k: medoids.len(),
        assignments,
        medoids,
        silhouette,
        point_labels,
        labels,
    }
}
