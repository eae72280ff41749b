use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::archive::{ArchiveEntry, GenerationRecord, RunArchive};
use super::{crowding_distance, fast_nondominated_sort, nondominated, SearchConfig, SearchRng};
use crate::error::{Error, Result};
use crate::evaluation::{Evaluation, Evaluator};
use crate::model::ArchitectureModel;
use crate::refactoring::{apply_action, apply_actions, is_feasible, random_feasible_action, RefactoringAction};

#[derive(Debug, Clone)]
pub struct Individual {
    pub chromosome: Vec<RefactoringAction>,
    pub evaluation: Arc<Evaluation>,
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    fn point(&self) -> [f64; 4] {
        self.evaluation.objectives.to_min()
    }
}

struct Genome<'a> {
    prefix_model: &'a ArchitectureModel,
    frozen: usize,
    genes: usize,
}

impl Genome<'_> {
    /// Samples the free genes left to right against the evolving model.
    fn random(&self, prefix: &[RefactoringAction], rng: &mut SearchRng) -> Result<Vec<RefactoringAction>> {
        let mut chrom = prefix.to_vec();
        let mut model = self.prefix_model.clone();
        for _ in 0..self.genes {
            let a = random_feasible_action(&model, rng)?;
            model = apply_action(&model, &a)?;
            chrom.push(a);
        }
        Ok(chrom)
    }

    /// Replaces free genes that became infeasible, left to right.
    fn repair(&self, chrom: &mut [RefactoringAction], rng: &mut SearchRng) -> Result<()> {
        let mut model = self.prefix_model.clone();
        for gene in chrom[self.frozen..].iter_mut() {
            if !is_feasible(&model, gene) {
                *gene = random_feasible_action(&model, rng)?;
            }
            model = apply_action(&model, gene)?;
        }
        Ok(())
    }

    fn mutate(&self, chrom: &mut [RefactoringAction], rng: &mut SearchRng) -> Result<()> {
        let pos = rng.random_range(self.frozen..self.frozen + self.genes);
        let model = apply_actions(self.prefix_model, &chrom[self.frozen..pos])?;
        chrom[pos] = random_feasible_action(&model, rng)?;
        self.repair(chrom, rng)
    }

    fn crossover(
        &self,
        a: &mut [RefactoringAction],
        b: &mut [RefactoringAction],
        rng: &mut SearchRng,
    ) {
        if self.genes < 2 {
            return;
        }
        let cut = rng.random_range(self.frozen + 1..self.frozen + self.genes);
        a[cut..].swap_with_slice(&mut b[cut..]);
    }
}

fn tournament<'a>(pop: &'a [Individual], rng: &mut SearchRng) -> &'a Individual {
    let a = &pop[rng.random_range(0..pop.len())];
    let b = &pop[rng.random_range(0..pop.len())];
    if a.rank != b.rank {
        return if a.rank < b.rank { a } else { b };
    }
    if a.crowding != b.crowding {
        return if a.crowding > b.crowding { a } else { b };
    }
    if rng.random_bool(0.5) {
        a
    } else {
        b
    }
}

/// Assigns rank and crowding within `pop`.
fn assign_fitness(pop: &mut [Individual]) {
    let pts: Vec<[f64; 4]> = pop.iter().map(Individual::point).collect();
    for (r, front) in fast_nondominated_sort(&pts).into_iter().enumerate() {
        let cd = crowding_distance(&pts, &front);
        for (i, d) in front.into_iter().zip(cd) {
            pop[i].rank = r;
            pop[i].crowding = d;
        }
    }
}

/// (μ+λ) survivor selection. Distinct chromosomes are ranked first; copies
/// of already selected chromosomes only fill remaining slots, in order.
fn select_survivors(combined: Vec<Individual>, size: usize) -> Vec<Individual> {
    let mut seen: HashMap<Vec<RefactoringAction>, ()> = HashMap::new();
    let mut unique = Vec::new();
    let mut copies = Vec::new();
    for ind in combined {
        if seen.insert(ind.chromosome.clone(), ()).is_none() {
            unique.push(ind);
        } else {
            copies.push(ind);
        }
    }
    let pts: Vec<[f64; 4]> = unique.iter().map(Individual::point).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    for front in fast_nondominated_sort(&pts) {
        if chosen.len() + front.len() <= size {
            chosen.extend(front);
        } else {
            let cd = crowding_distance(&pts, &front);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| cd[b].total_cmp(&cd[a]));
            let room = size - chosen.len();
            chosen.extend(order.into_iter().take(room).map(|k| front[k]));
        }
        if chosen.len() == size {
            break;
        }
    }
    chosen.sort_unstable();
    let mut slots: Vec<Option<Individual>> = unique.into_iter().map(Some).collect();
    let mut out: Vec<Individual> = chosen.into_iter().filter_map(|i| slots[i].take()).collect();
    let missing = size.saturating_sub(out.len());
    out.extend(copies.into_iter().take(missing));
    out
}

struct Recorder {
    index: HashMap<Vec<RefactoringAction>, usize>,
    entries: Vec<ArchiveEntry>,
    generations: Vec<GenerationRecord>,
}

impl Recorder {
    fn entry_of(&mut self, ind: &Individual, generation: usize) -> usize {
        if let Some(&i) = self.index.get(&ind.chromosome) {
            return i;
        }
        let i = self.entries.len();
        self.entries.push(ArchiveEntry {
            chromosome: ind.chromosome.clone(),
            objectives: ind.evaluation.objectives,
            feasible: ind.evaluation.feasible,
            generation,
        });
        self.index.insert(ind.chromosome.clone(), i);
        i
    }

    fn record(&mut self, pop: &[Individual], generation: usize) {
        let population: Vec<usize> = pop.iter().map(|p| self.entry_of(p, generation)).collect();
        let mut front: Vec<usize> = pop
            .iter()
            .zip(&population)
            .filter(|(p, _)| p.rank == 0)
            .map(|(_, &e)| e)
            .collect();
        front.sort_unstable();
        front.dedup();
        self.generations.push(GenerationRecord {
            generation,
            population,
            front,
        });
    }
}

fn evaluate_all(evaluator: &Evaluator, chroms: Vec<Vec<RefactoringAction>>) -> Vec<Individual> {
    chroms
        .into_par_iter()
        .map(|chromosome| {
            let evaluation = evaluator.evaluate_or_sentinel(&chromosome);
            Individual {
                chromosome,
                evaluation,
                rank: 0,
                crowding: 0.0,
            }
        })
        .collect()
}

/// Runs NSGA-II for `iterations` generations on chromosomes made of the
/// frozen `prefix` followed by `genes` free genes. `progress` is called with
/// the number of completed generations after each one.
#[allow(clippy::too_many_arguments)]
pub fn evolve_segment(
    evaluator: &Evaluator,
    config: &SearchConfig,
    prefix: &[RefactoringAction],
    iterations: usize,
    genes: usize,
    seed: u64,
    stream: u64,
    progress: &(dyn Fn(usize) + Sync),
) -> Result<RunArchive> {
    if genes == 0 {
        return Err(Error::Config("segment must have at least one free gene".into()));
    }
    let mut rng = super::run_rng(seed, stream);
    let prefix_model = apply_actions(evaluator.model(), prefix)?;
    let genome = Genome {
        prefix_model: &prefix_model,
        frozen: prefix.len(),
        genes,
    };
    let mu = config.population_size;

    let mut initial = Vec::with_capacity(mu);
    for _ in 0..mu {
        initial.push(genome.random(prefix, &mut rng)?);
    }
    let mut pop = evaluate_all(evaluator, initial);
    assign_fitness(&mut pop);

    let mut rec = Recorder {
        index: HashMap::new(),
        entries: Vec::new(),
        generations: Vec::new(),
    };
    rec.record(&pop, 0);

    for generation in 1..=iterations {
        let mut children = Vec::with_capacity(mu);
        while children.len() < mu {
            let mut a = tournament(&pop, &mut rng).chromosome.clone();
            let mut b = tournament(&pop, &mut rng).chromosome.clone();
            if rng.random_bool(config.p_crossover) {
                genome.crossover(&mut a, &mut b, &mut rng);
                genome.repair(&mut a, &mut rng)?;
                genome.repair(&mut b, &mut rng)?;
            }
            for c in [&mut a, &mut b] {
                if rng.random_bool(config.p_mutation) {
                    genome.mutate(c, &mut rng)?;
                }
            }
            children.push(a);
            children.push(b);
        }
        children.truncate(mu);
        let offspring = evaluate_all(evaluator, children);
        for child in &offspring {
            rec.entry_of(child, generation);
        }

        let mut combined = pop;
        combined.extend(offspring);
        pop = select_survivors(combined, mu);
        assign_fitness(&mut pop);
        rec.record(&pop, generation);
        progress(generation);
    }

    let final_front = rec.generations.last().map(|g| g.front.clone()).unwrap_or_default();
    let candidates: Vec<usize> = (0..rec.entries.len()).filter(|&i| rec.entries[i].feasible).collect();
    let pts: Vec<[f64; 4]> = candidates.iter().map(|&i| rec.entries[i].objectives.to_min()).collect();
    let archive_front = nondominated(&pts).into_iter().map(|k| candidates[k]).collect();

    Ok(RunArchive {
        config: config.clone(),
        seed,
        stream,
        frozen_prefix_len: prefix.len(),
        segment_iterations: iterations,
        segment_genes: genes,
        entries: rec.entries,
        generations: rec.generations,
        final_front,
        archive_front,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::{AntipatternReport, ObjectiveVector};

    fn ind(tag: &str, obj: [f64; 2]) -> Individual {
        Individual {
            chromosome: vec![RefactoringAction::Clon { node: tag.into() }],
            evaluation: Arc::new(Evaluation {
                objectives: ObjectiveVector::new(obj[0], obj[1], 0.0, 0),
                antipatterns: AntipatternReport::default(),
                indices: None,
                feasible: true,
                error: None,
            }),
            rank: 0,
            crowding: 0.0,
        }
    }

    #[test]
    fn survivors_prefer_distinct_chromosomes() {
        let combined = vec![
            ind("a", [1.0, 1.0]),
            ind("a", [1.0, 1.0]),
            ind("b", [0.5, 0.5]),
            ind("c", [0.1, 0.1]),
        ];
        let s = select_survivors(combined, 2);
        let tags: Vec<_> = s.iter().map(|i| i.chromosome[0].to_string()).collect();
        assert_eq!(s.len(), 2);
        assert!(tags[0].contains('a') && tags[1].contains('b'), "{tags:?}");
    }

    #[test]
    fn survivors_fill_from_copies() {
        let combined = vec![ind("a", [1.0, 1.0]), ind("a", [1.0, 1.0]), ind("a", [1.0, 1.0])];
        assert_eq!(select_survivors(combined, 2).len(), 2);
    }
}
