//! NSGA-II over refactoring sequences.

mod archive;
mod nsga;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use archive::{ArchiveEntry, GenerationRecord, RunArchive, SolutionRecord};
pub use nsga::{evolve_segment, Individual};

use crate::error::{Error, Result};
use crate::evaluation::ObjectiveVector;

/// The search RNG: portable, seedable, with independent streams.
pub type SearchRng = ChaCha8Rng;

/// RNG for independent run `run_index` of a configuration seeded with `seed`.
pub fn run_rng(seed: u64, run_index: u64) -> SearchRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run_index);
    rng
}

/// Mixes `parts` into `base` (splitmix64 finalizer per part).
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, p| mix(acc ^ mix(*p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    #[default]
    BinaryTournament,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Crossover {
    #[default]
    SinglePoint,
}

/// Simple mutation replaces one gene with a fresh feasible action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    Simple,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub population_size: usize,
    /// Total generations N.
    pub iterations: usize,
    /// Chromosome length L.
    pub chromosome_length: usize,
    /// Designer interactions k.
    pub interactions: usize,
    pub p_crossover: f64,
    pub p_mutation: f64,
    pub selection: Selection,
    pub crossover: Crossover,
    pub mutation: Mutation,
    pub seed: u64,
    pub independent_runs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            population_size: 16,
            iterations: 100,
            chromosome_length: 4,
            interactions: 0,
            p_crossover: 0.8,
            p_mutation: 0.2,
            selection: Selection::BinaryTournament,
            crossover: Crossover::SinglePoint,
            mutation: Mutation::Simple,
            seed: 0,
            independent_runs: 31,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        segment_plan(self.iterations, self.chromosome_length, self.interactions)?;
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "population_size must be even and >= 2, got {}",
                self.population_size
            )));
        }
        for (name, p) in [("p_crossover", self.p_crossover), ("p_mutation", self.p_mutation)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must be in [0, 1], got {p}")));
            }
        }
        if self.chromosome_length == 0 {
            return Err(Error::Config("chromosome_length must be >= 1".into()));
        }
        Ok(())
    }

    pub fn plan(&self) -> Result<Vec<Segment>> {
        segment_plan(self.iterations, self.chromosome_length, self.interactions)
    }
}

/// One automated search step between interactions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub iterations: usize,
    pub genes: usize,
}

/// Splits N generations and L genes into k+1 equal segments.
pub fn segment_plan(iterations: usize, length: usize, interactions: usize) -> Result<Vec<Segment>> {
    let segments = interactions + 1;
    if !iterations.is_multiple_of(segments) || !length.is_multiple_of(segments) || length == 0 {
        return Err(Error::Divisibility {
            iterations,
            length,
            segments,
        });
    }
    Ok(vec![
        Segment {
            iterations: iterations / segments,
            genes: length / segments,
        };
        segments
    ])
}

/// Pareto dominance in minimization space.
pub fn dominates_min(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Dominance or equality in minimization space.
pub fn weakly_dominates_min(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Dominance under the fixed directions (max, max, min, min).
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    dominates_min(&a.to_min(), &b.to_min())
}

/// Partition into fronts of minimization points. Every index appears in
/// exactly one front; front 0 is the non-dominated set.
pub fn fast_nondominated_sort<P: AsRef<[f64]>>(points: &[P]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            if dominates_min(points[p].as_ref(), points[q].as_ref()) {
                dominated_by[p].push(q);
            } else if dominates_min(points[q].as_ref(), points[p].as_ref()) {
                counts[p] += 1;
            }
        }
        if counts[p] == 0 {
            current.push(p);
        }
    }
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by[p] {
                counts[q] -= 1;
                if counts[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Indices of the non-dominated points.
pub fn nondominated<P: AsRef<[f64]>>(points: &[P]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points
                .iter()
                .any(|q| dominates_min(q.as_ref(), points[i].as_ref()))
        })
        .collect()
}

/// Crowding distance of each member of `front` (indices into `points`),
/// returned in the order of `front`. Boundary members of every objective
/// get `+∞`; an objective with zero range adds nothing to interior members.
pub fn crowding_distance<P: AsRef<[f64]>>(points: &[P], front: &[usize]) -> Vec<f64> {
    let m = front.len();
    let mut dist = vec![0.0; m];
    if m == 0 {
        return dist;
    }
    let dims = points[front[0]].as_ref().len();
    let mut order: Vec<usize> = (0..m).collect();
    for d in 0..dims {
        let value = |i: usize| points[front[i]].as_ref()[d];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)));
        let (lo, hi) = (value(order[0]), value(order[m - 1]));
        dist[order[0]] = f64::INFINITY;
        dist[order[m - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..m.saturating_sub(1) {
            let gap = value(order[w + 1]) - value(order[w - 1]);
            dist[order[w]] += gap / range;
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominance_examples() {
        let a = ObjectiveVector::new(0.5, 0.9, 2.0, 1);
        let b = ObjectiveVector::new(0.4, 0.9, 3.0, 1);
        assert!(dominates(&a, &b));
        assert!(!dominates(&a, &a));
        let c = ObjectiveVector::new(0.5, 0.8, 2.0, 1);
        let d = ObjectiveVector::new(0.4, 0.9, 2.0, 1);
        assert!(!dominates(&c, &d));
        assert!(!dominates(&d, &c));
    }

    #[test]
    fn sort_examples() {
        let pts = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![1.0, 3.0]];
        assert_eq!(fast_nondominated_sort(&pts), vec![vec![0], vec![1, 2]]);

        let same = vec![vec![1.0, 1.0]; 4];
        assert_eq!(fast_nondominated_sort(&same), vec![vec![0, 1, 2, 3]]);

        let chain = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]];
        assert_eq!(
            fast_nondominated_sort(&chain),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn crowding_examples() {
        let two = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(crowding_distance(&two, &[0, 1]), vec![f64::INFINITY; 2]);

        let three = vec![vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]];
        let d = crowding_distance(&three, &[0, 1, 2]);
        assert_eq!(d[1], 2.0);
        assert!(d[0].is_infinite() && d[2].is_infinite());

        let flat = vec![vec![1.0, 1.0]; 4];
        let d = crowding_distance(&flat, &[0, 1, 2, 3]);
        assert_eq!(d, vec![f64::INFINITY, 0.0, 0.0, f64::INFINITY]);
    }

    #[test]
    fn plan_examples() {
        let four = segment_plan(100, 8, 3).unwrap();
        assert_eq!(
            four,
            vec![
                Segment {
                    iterations: 25,
                    genes: 2
                };
                4
            ]
        );
        assert_eq!(
            segment_plan(100, 4, 1).unwrap(),
            vec![
                Segment {
                    iterations: 50,
                    genes: 2
                };
                2
            ]
        );
        assert_eq!(
            segment_plan(100, 4, 0).unwrap(),
            vec![Segment {
                iterations: 100,
                genes: 4
            }]
        );
        let err = segment_plan(100, 6, 3).unwrap_err();
        assert!(err.to_string().contains("N=100"));
        assert!(err.to_string().contains("L=6"));
    }

    #[test]
    fn config_validation() {
        let ok = SearchConfig::default();
        ok.validate().unwrap();
        let odd = SearchConfig {
            population_size: 15,
            ..SearchConfig::default()
        };
        assert!(odd.validate().is_err());
        let indivisible = SearchConfig {
            interactions: 3,
            chromosome_length: 6,
            ..SearchConfig::default()
        };
        assert!(matches!(
            indivisible.validate(),
            Err(Error::Divisibility { .. })
        ));
    }

    #[test]
    fn run_streams_differ() {
        use rand::Rng;
        let a: u64 = run_rng(1, 0).random();
        let b: u64 = run_rng(1, 1).random();
        let c: u64 = run_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
