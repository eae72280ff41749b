//! Front quality indicators and landscape metrics. All indicators work in
//! minimization space.

mod landscape;
mod stats;
mod tree;

pub use landscape::{kde_grid, pca_project, scott_bandwidth, KdeGrid, Projection};
pub use stats::{a12, compare, magnitude, mann_whitney_u, Magnitude, MannWhitney, StatReport};
pub use tree::{tree_coverage, SequenceTree, TreeNode};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{ObjectiveVector, OBJECTIVES};
use crate::interaction::discretize;
use crate::optimizer::{nondominated, weakly_dominates_min};

/// Offset added to the nadir so boundary points enclose volume.
pub const NADIR_EPSILON: f64 = 1e-6;

/// Per-dimension bounds of a reference front in minimization space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub lower: [f64; OBJECTIVES],
    pub upper: [f64; OBJECTIVES],
}

impl Normalizer {
    pub fn from_reference(reference: &[ObjectiveVector]) -> Result<Self> {
        if reference.is_empty() {
            return Err(Error::Empty("reference front"));
        }
        let mut lower = [f64::INFINITY; OBJECTIVES];
        let mut upper = [f64::NEG_INFINITY; OBJECTIVES];
        for v in reference {
            for (d, x) in v.to_min().into_iter().enumerate() {
                lower[d] = lower[d].min(x);
                upper[d] = upper[d].max(x);
            }
        }
        Ok(Self { lower, upper })
    }

    /// Minimization-space vector scaled to `[0, 1]`; values outside the
    /// reference bounds are clamped, and constant dimensions map to 0.
    pub fn apply(&self, v: &ObjectiveVector) -> [f64; OBJECTIVES] {
        let m = v.to_min();
        std::array::from_fn(|d| {
            let range = self.upper[d] - self.lower[d];
            if range > 0.0 {
                ((m[d] - self.lower[d]) / range).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
    }

    pub fn front(&self, front: &[ObjectiveVector]) -> NormalizedFront {
        NormalizedFront::new(front.iter().map(|v| self.apply(v).to_vec()).collect())
    }
}

/// Mutually non-dominated points with coordinates in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedFront {
    pub points: Vec<Vec<f64>>,
}

impl NormalizedFront {
    /// Keeps the non-dominated points, one copy of each.
    pub fn new(points: Vec<Vec<f64>>) -> Self {
        let keep = nondominated(&points);
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(keep.len());
        for i in keep {
            if !out.contains(&points[i]) {
                out.push(points[i].clone());
            }
        }
        Self { points: out }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_dims<P: AsRef<[f64]>>(sets: &[&[P]]) -> Result<usize> {
    let mut dims = None;
    for set in sets {
        for p in set.iter() {
            let d = p.as_ref().len();
            match dims {
                None => dims = Some(d),
                Some(e) if e != d => return Err(Error::Dimension { expected: e, got: d }),
                _ => {}
            }
        }
    }
    Ok(dims.unwrap_or(0))
}

/// Componentwise worst value plus [`NADIR_EPSILON`].
pub fn nadir<P: AsRef<[f64]>>(reference: &[P]) -> Result<Vec<f64>> {
    let dims = check_dims(&[reference])?;
    if reference.is_empty() {
        return Err(Error::Empty("reference front"));
    }
    Ok((0..dims)
        .map(|d| {
            reference
                .iter()
                .map(|p| p.as_ref()[d])
                .fold(f64::NEG_INFINITY, f64::max)
                + NADIR_EPSILON
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hypervolume {
    pub volume: f64,
    /// Points that do not dominate the reference point.
    pub dropped: usize,
}

/// Exact hypervolume by recursive slicing along the last objective.
pub fn hypervolume<P: AsRef<[f64]>>(front: &[P], reference: &[f64]) -> Result<Hypervolume> {
    for p in front {
        if p.as_ref().len() != reference.len() {
            return Err(Error::Dimension {
                expected: reference.len(),
                got: p.as_ref().len(),
            });
        }
    }
    let kept: Vec<Vec<f64>> = front
        .iter()
        .map(|p| p.as_ref())
        .filter(|p| p.iter().zip(reference).all(|(x, r)| x <= r))
        .map(<[f64]>::to_vec)
        .collect();
    let dropped = front.len() - kept.len();
    Ok(Hypervolume {
        volume: slice_volume(kept, reference),
        dropped,
    })
}

fn slice_volume(mut points: Vec<Vec<f64>>, reference: &[f64]) -> f64 {
    let d = reference.len();
    if points.is_empty() || d == 0 {
        return 0.0;
    }
    if d == 1 {
        let best = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        return (reference[0] - best).max(0.0);
    }
    let last = d - 1;
    points.sort_by(|a, b| a[last].total_cmp(&b[last]));
    let mut volume = 0.0;
    for i in 0..points.len() {
        let top = if i + 1 < points.len() {
            points[i + 1][last]
        } else {
            reference[last]
        };
        let height = top - points[i][last];
        if height <= 0.0 {
            continue;
        }
        let projected: Vec<Vec<f64>> = points[..=i].iter().map(|p| p[..last].to_vec()).collect();
        let keep = nondominated(&projected);
        let slab: Vec<Vec<f64>> = keep.into_iter().map(|k| projected[k].clone()).collect();
        volume += height * slice_volume(slab, &reference[..last]);
    }
    volume
}

/// Mean over reference points of the dominance-aware distance to the
/// nearest front point.
pub fn igd_plus<P: AsRef<[f64]>, Q: AsRef<[f64]>>(front: &[P], reference: &[Q]) -> Result<f64> {
    check_pair(front, reference)?;
    let total: f64 = reference
        .iter()
        .map(|r| {
            front
                .iter()
                .map(|a| {
                    a.as_ref()
                        .iter()
                        .zip(r.as_ref())
                        .map(|(ai, ri)| (ai - ri).max(0.0).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.len() as f64)
}

/// Additive ε-indicator of `front` with respect to `reference`.
pub fn epsilon<P: AsRef<[f64]>, Q: AsRef<[f64]>>(front: &[P], reference: &[Q]) -> Result<f64> {
    check_pair(front, reference)?;
    Ok(reference
        .iter()
        .map(|r| {
            front
                .iter()
                .map(|a| {
                    a.as_ref()
                        .iter()
                        .zip(r.as_ref())
                        .map(|(ai, ri)| ai - ri)
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

fn check_pair<P: AsRef<[f64]>, Q: AsRef<[f64]>>(front: &[P], reference: &[Q]) -> Result<()> {
    if front.is_empty() {
        return Err(Error::Empty("front"));
    }
    if reference.is_empty() {
        return Err(Error::Empty("reference front"));
    }
    let a: Vec<&[f64]> = front.iter().map(AsRef::as_ref).collect();
    let b: Vec<&[f64]> = reference.iter().map(AsRef::as_ref).collect();
    check_dims(&[&a, &b])?;
    Ok(())
}

/// C(A, B): share of `b` weakly dominated by some member of `a`.
pub fn coverage<P: AsRef<[f64]>, Q: AsRef<[f64]>>(a: &[P], b: &[Q]) -> Result<f64> {
    if b.is_empty() {
        return Err(Error::Empty("covered set"));
    }
    let av: Vec<&[f64]> = a.iter().map(AsRef::as_ref).collect();
    let bv: Vec<&[f64]> = b.iter().map(AsRef::as_ref).collect();
    check_dims(&[&av, &bv])?;
    let covered = bv
        .iter()
        .filter(|q| av.iter().any(|p| weakly_dominates_min(p, q)))
        .count();
    Ok(covered as f64 / b.len() as f64)
}

/// Number of bins of the trade-off histogram.
pub const LABEL_BINS: usize = 625;

/// Normalized Shannon entropy of the ordinal-label histogram.
pub fn entropy_tradeoff(solutions: &[ObjectiveVector]) -> Result<f64> {
    if solutions.is_empty() {
        return Err(Error::Empty("solutions"));
    }
    let mut counts = vec![0usize; LABEL_BINS];
    for l in discretize(solutions) {
        counts[l.bin()] += 1;
    }
    Ok(histogram_entropy(&counts) / (LABEL_BINS as f64).ln())
}

/// Shannon entropy (nats) of a count histogram.
pub fn histogram_entropy(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let q = c as f64 / n as f64;
            -q * q.ln()
        })
        .sum();
    h.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hv_examples() {
        let r = [1.0, 1.0];
        assert_eq!(hypervolume(&[[0.25, 0.25]], &r).unwrap().volume, 0.5625);
        let hv = hypervolume(&[[0.2, 0.6], [0.6, 0.2]], &r).unwrap().volume;
        assert!((hv - 0.48).abs() < 1e-15);
        assert_eq!(hypervolume(&[[1.0, 1.0]], &r).unwrap().volume, 0.0);
        let out = hypervolume(&[[2.0, 0.0]], &r).unwrap();
        assert_eq!(out.dropped, 1);
    }

    #[test]
    fn nadir_examples() {
        let n = nadir(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(n, vec![1.0 + NADIR_EPSILON; 2]);
    }

    #[test]
    fn igd_and_epsilon_examples() {
        assert!((igd_plus(&[[1.0, 1.0]], &[[0.0, 0.0]]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(igd_plus(&[[1.0, 0.0]], &[[0.0, 0.0], [2.0, 0.0]]).unwrap(), 0.5);
        assert_eq!(epsilon(&[[0.3, 0.1]], &[[0.0, 0.0]]).unwrap(), 0.3);
        let f = [[0.1, 0.9], [0.9, 0.1]];
        assert_eq!(epsilon(&f, &f).unwrap(), 0.0);
        assert!(igd_plus(&[[0.0, 0.0, 0.0]], &[[0.0, 0.0]]).is_err());
    }

    #[test]
    fn coverage_examples() {
        assert_eq!(coverage(&[[1.0, 1.0]], &[[2.0, 2.0]]).unwrap(), 1.0);
        assert_eq!(coverage(&[[2.0, 2.0]], &[[1.0, 1.0]]).unwrap(), 0.0);
        let a = [[1.0, 3.0], [3.0, 1.0]];
        let b = [[2.0, 4.0], [4.0, 0.0]];
        assert_eq!(coverage(&a, &b).unwrap(), 0.5);
    }

    #[test]
    fn normalized_front_is_unit_and_nondominated() {
        let reference = [
            ObjectiveVector::new(0.1, 0.9, 1.0, 0),
            ObjectiveVector::new(0.3, 0.8, 2.0, 1),
        ];
        let n = Normalizer::from_reference(&reference).unwrap();
        let f = n.front(&[ObjectiveVector::new(0.5, 0.5, 9.0, 3), reference[0]]);
        for p in &f.points {
            assert!(p.iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }
}
