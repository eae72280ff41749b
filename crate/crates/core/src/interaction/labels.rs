use std::fmt;

use serde::{Deserialize, Serialize};

use crate::evaluation::{ObjectiveVector, OBJECTIVES};

/// Words per objective, indexed by level. Maximized objectives run worst to
/// best, minimized ones best to worst.
pub const VOCABULARY: [[&str; 5]; OBJECTIVES] = [
    ["very-slow", "slow", "average", "fast", "very-fast"],
    [
        "unreliable",
        "minimally-reliable",
        "average",
        "reliable",
        "very-reliable",
    ],
    ["very-few", "few", "average", "many", "very-many"],
    ["very-few", "few", "average", "many", "very-many"],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Discretization {
    #[default]
    EqualWidth,
    Quantile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrdinalLabel {
    pub levels: [u8; OBJECTIVES],
}

impl OrdinalLabel {
    pub fn words(&self) -> [&'static str; OBJECTIVES] {
        std::array::from_fn(|d| VOCABULARY[d][self.levels[d] as usize])
    }

    /// Index of the label in the 5⁴ label space.
    pub fn bin(&self) -> usize {
        self.levels.iter().fold(0, |acc, &l| acc * 5 + l as usize)
    }
}

impl fmt::Display for OrdinalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.words().join(" / "))
    }
}

/// Equal-width level of `v` within `[min, max]`.
pub fn equal_width_level(v: f64, min: f64, max: f64) -> u8 {
    let range = max - min;
    if !(range > 0.0) {
        return 2;
    }
    (4.0 * (v - min) / range).floor().clamp(0.0, 4.0) as u8
}

pub fn discretize(front: &[ObjectiveVector]) -> Vec<OrdinalLabel> {
    discretize_with(front, Discretization::EqualWidth)
}

/// Per-objective 5-level labels; bins come from the given set only.
pub fn discretize_with(front: &[ObjectiveVector], strategy: Discretization) -> Vec<OrdinalLabel> {
    let cols: Vec<[f64; OBJECTIVES]> = front.iter().map(ObjectiveVector::as_array).collect();
    let mut levels = vec![[2u8; OBJECTIVES]; front.len()];
    for d in 0..OBJECTIVES {
        let values: Vec<f64> = cols.iter().map(|c| c[d]).collect();
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(max > min) {
            continue;
        }
        match strategy {
            Discretization::EqualWidth => {
                for (l, v) in levels.iter_mut().zip(&values) {
                    l[d] = equal_width_level(*v, min, max);
                }
            }
            Discretization::Quantile => {
                let mut sorted = values.clone();
                sorted.sort_by(f64::total_cmp);
                let n = sorted.len() as f64;
                for (l, v) in levels.iter_mut().zip(&values) {
                    let below = sorted.partition_point(|x| x < v) as f64;
                    l[d] = (5.0 * below / n).floor().min(4.0) as u8;
                }
            }
        }
    }
    levels.into_iter().map(|levels| OrdinalLabel { levels }).collect()
}
