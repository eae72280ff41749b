use serde::{Deserialize, Serialize};

use super::{fast_nondominated_sort, nondominated, SearchConfig};
use crate::evaluation::ObjectiveVector;
use crate::refactoring::RefactoringAction;

/// One distinct chromosome evaluated during a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub chromosome: Vec<RefactoringAction>,
    pub objectives: ObjectiveVector,
    pub feasible: bool,
    /// Generation in which the chromosome was first evaluated (0 = initial
    /// population).
    pub generation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Entry indices of the population, duplicates included.
    pub population: Vec<usize>,
    /// Entry indices of the population's first front, deduplicated.
    pub front: Vec<usize>,
}

/// Everything one segment run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArchive {
    pub config: SearchConfig,
    pub seed: u64,
    pub stream: u64,
    pub frozen_prefix_len: usize,
    pub segment_iterations: usize,
    pub segment_genes: usize,
    pub entries: Vec<ArchiveEntry>,
    pub generations: Vec<GenerationRecord>,
    /// First front of the last population.
    pub final_front: Vec<usize>,
    /// Non-dominated feasible entries of the whole archive.
    pub archive_front: Vec<usize>,
}

/// Row of the solutions document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub chromosome: Vec<RefactoringAction>,
    pub objectives: ObjectiveVector,
    pub rank: usize,
    pub generation: usize,
}

impl RunArchive {
    pub fn objectives_of(&self, indices: &[usize]) -> Vec<ObjectiveVector> {
        indices.iter().map(|&i| self.entries[i].objectives).collect()
    }

    /// Objective vectors of the archive front; this front's size is the NPS.
    pub fn front(&self) -> Vec<ObjectiveVector> {
        self.objectives_of(&self.archive_front)
    }

    pub fn front_chromosomes(&self) -> impl Iterator<Item = &[RefactoringAction]> {
        self.archive_front
            .iter()
            .map(|&i| self.entries[i].chromosome.as_slice())
    }

    pub fn nps(&self) -> usize {
        self.archive_front.len()
    }

    /// Archive front restricted to entries first seen up to `generation`.
    pub fn archive_front_at(&self, generation: usize) -> Vec<usize> {
        let candidates: Vec<usize> = (0..self.entries.len())
            .filter(|&i| self.entries[i].feasible && self.entries[i].generation <= generation)
            .collect();
        let pts: Vec<[f64; 4]> = candidates
            .iter()
            .map(|&i| self.entries[i].objectives.to_min())
            .collect();
        nondominated(&pts).into_iter().map(|k| candidates[k]).collect()
    }

    pub fn last_generation(&self) -> usize {
        self.generations.last().map(|g| g.generation).unwrap_or(0)
    }

    /// One record per archived individual, ranked by non-dominated sorting
    /// over all feasible entries.
    pub fn solutions(&self) -> Vec<SolutionRecord> {
        let feasible: Vec<usize> = (0..self.entries.len())
            .filter(|&i| self.entries[i].feasible)
            .collect();
        let pts: Vec<[f64; 4]> = feasible
            .iter()
            .map(|&i| self.entries[i].objectives.to_min())
            .collect();
        let mut rank = vec![usize::MAX; self.entries.len()];
        for (r, front) in fast_nondominated_sort(&pts).into_iter().enumerate() {
            for k in front {
                rank[feasible[k]] = r;
            }
        }
        self.entries
            .iter()
            .zip(rank)
            .map(|(e, rank)| SolutionRecord {
                chromosome: e.chromosome.clone(),
                objectives: e.objectives,
                rank,
                generation: e.generation,
            })
            .collect()
    }
}
