//! Rank statistics for comparing indicator samples.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Largest smaller sample size for which the exact U distribution is used.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Magnitude {
    Negligible,
    Small,
    Medium,
    Large,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    /// U of the first sample.
    pub u: f64,
    pub p_value: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub p_value: f64,
    pub a12: f64,
    pub magnitude: Magnitude,
}

fn midranks(pooled: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided Mann–Whitney U test. Exact (ties handled through midranks)
/// when the smaller sample has at most [`EXACT_LIMIT`] values, otherwise a
/// tie- and continuity-corrected normal approximation.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("sample"));
    }
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).cloned().collect();
    let ranks = midranks(&pooled);
    let ra: f64 = ranks[..na].iter().sum();
    let u = ra - (na * (na + 1)) as f64 / 2.0;

    if na.min(nb) <= EXACT_LIMIT {
        // Distribution of twice the rank sum of a random size-na subset.
        let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
        let max_sum: usize = doubled.iter().sum();
        let mut ways = vec![vec![0.0f64; max_sum + 1]; na + 1];
        ways[0][0] = 1.0;
        for &w in &doubled {
            for j in (1..=na).rev() {
                for s in (w..=max_sum).rev() {
                    let prev = ways[j - 1][s - w];
                    if prev > 0.0 {
                        ways[j][s] += prev;
                    }
                }
            }
        }
        let dist = &ways[na];
        let total: f64 = dist.iter().sum();
        let observed = (2.0 * ra).round() as usize;
        let le: f64 = dist[..=observed].iter().sum();
        let ge: f64 = dist[observed..].iter().sum();
        let p = (2.0 * le.min(ge) / total).min(1.0);
        return Ok(MannWhitney {
            u,
            p_value: p,
            exact: true,
        });
    }

    let n = (na + nb) as f64;
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let (fa, fb) = (na as f64, nb as f64);
    let mean = fa * fb / 2.0;
    let var = fa * fb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let p = if var <= 0.0 {
        1.0
    } else {
        let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
        let normal = Normal::standard();
        (2.0 * (1.0 - normal.cdf(z))).min(1.0)
    };
    Ok(MannWhitney {
        u,
        p_value: p,
        exact: false,
    })
}

/// Vargha–Delaney Â12: probability that a value of `a` exceeds one of `b`,
/// ties counting half.
pub fn a12(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("sample"));
    }
    let mut wins = 0.0;
    for x in a {
        for y in b {
            if x > y {
                wins += 1.0;
            } else if x == y {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (a.len() * b.len()) as f64)
}

/// Effect magnitude of an Â12 value. The thresholds apply to the
/// dominance statistic `|2·Â12 − 1|`.
pub fn magnitude(a12: f64) -> Magnitude {
    let d = (2.0 * (a12 - 0.5)).abs();
    if d < 0.147 {
        Magnitude::Negligible
    } else if d < 0.33 {
        Magnitude::Small
    } else if d < 0.474 {
        Magnitude::Medium
    } else {
        Magnitude::Large
    }
}

pub fn compare(a: &[f64], b: &[f64]) -> Result<StatReport> {
    let p_value = mann_whitney_u(a, b)?.p_value;
    let a12 = a12(a, b)?;
    Ok(StatReport {
        p_value,
        a12,
        magnitude: magnitude(a12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_triples() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.u, 0.0);
        assert!(r.exact);
        assert!((r.p_value - 0.1).abs() < 1e-15);
    }

    #[test]
    fn a12_examples() {
        assert_eq!(a12(&[1.0, 2.0], &[1.0, 3.0]).unwrap(), 0.375);
        let s = [3.0, 1.0, 2.0];
        let rep = compare(&s, &s).unwrap();
        assert_eq!(rep.a12, 0.5);
        assert_eq!(rep.magnitude, Magnitude::Negligible);
        assert_eq!(rep.p_value, 1.0);
    }

    #[test]
    fn magnitude_thresholds() {
        assert_eq!(magnitude(0.5 + 0.146 / 2.0), Magnitude::Negligible);
        assert_eq!(magnitude(0.5 + 0.2 / 2.0), Magnitude::Small);
        assert_eq!(magnitude(0.5 - 0.4 / 2.0), Magnitude::Medium);
        assert_eq!(magnitude(1.0), Magnitude::Large);
        assert_eq!(magnitude(0.0), Magnitude::Large);
    }

    #[test]
    fn large_samples_use_normal() {
        let a: Vec<f64> = (0..30).map(f64::from).collect();
        let b: Vec<f64> = (0..30).map(|i| f64::from(i) + 0.5).collect();
        let r = mann_whitney_u(&a, &b).unwrap();
        assert!(!r.exact);
        assert!(r.p_value > 0.5);
    }
}
