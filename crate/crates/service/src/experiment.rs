//! Batch comparison of reference, baseline and scripted interactive runs.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use archsteer_core::evaluation::{EvalSettings, Evaluator, ObjectiveVector};
use archsteer_core::indicators::{
    compare, coverage, entropy_tradeoff, epsilon, hypervolume, igd_plus, nadir, Magnitude,
    Normalizer, SequenceTree, tree_coverage,
};
use archsteer_core::interaction::{ClusterConfig, SessionTree};
use archsteer_core::model::ArchitectureModel;
use archsteer_core::optimizer::{
    derive_seed, evolve_segment, nondominated, segment_plan, RunArchive, SearchConfig,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const REPORT_FORMAT: u32 = 1;
pub const ENTROPY_DEFINITION: &str = "normalized-shannon-5x5x5x5";

pub const INDICATORS: [&str; 6] = ["nps", "hv", "igd_plus", "epsilon", "entropy", "tree_coverage"];

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Core(#[from] archsteer_core::Error),
    #[error("reference runs produced no feasible solutions")]
    NoReference,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("unknown {what} '{value}'")]
    Unknown { what: &'static str, value: String },
}

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Desk,
    Paper,
}

impl FromStr for Scale {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Scale::Desk),
            "paper" => Ok(Scale::Paper),
            _ => Err(ExperimentError::Unknown {
                what: "scale",
                value: s.into(),
            }),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Desk => "desk",
            Scale::Paper => "paper",
        })
    }
}

/// Concrete run sizes of a scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSpec {
    pub population_size: usize,
    pub runs: usize,
    pub chromosome_length: usize,
    pub reference_iterations: usize,
    pub baseline_iterations: usize,
    pub interactions: usize,
    pub segment_iterations: usize,
    pub segment_genes: usize,
}

impl ScaleSpec {
    pub fn validate(&self) -> archsteer_core::Result<()> {
        let plan = segment_plan(self.baseline_iterations, self.chromosome_length, self.interactions)?;
        segment_plan(self.reference_iterations, self.chromosome_length, 0)?;
        if self.runs == 0 {
            return Err(archsteer_core::Error::Config("runs must be positive".into()));
        }
        if plan[0].iterations != self.segment_iterations || plan[0].genes != self.segment_genes {
            return Err(archsteer_core::Error::Config(format!(
                "segment sizes ({}, {}) disagree with the plan ({}, {})",
                self.segment_iterations, self.segment_genes, plan[0].iterations, plan[0].genes
            )));
        }
        Ok(())
    }
}

impl Scale {
    pub fn spec(self) -> ScaleSpec {
        let (pop, runs, reference, baseline) = match self {
            Scale::Desk => (8, 10, 600, 60),
            Scale::Paper => (16, 31, 1000, 100),
        };
        ScaleSpec {
            population_size: pop,
            runs,
            chromosome_length: 4,
            reference_iterations: reference,
            baseline_iterations: baseline,
            interactions: 1,
            segment_iterations: baseline / 2,
            segment_genes: 2,
        }
    }
}

/// How the scripted designer picks a cluster at the interaction point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    BestPerfq,
    BestReliability,
    LowestCost,
    FewestAntipatterns,
    /// A fixed cluster id, clamped to the available clusters.
    Cluster(usize),
}

impl Policy {
    pub const DEFAULT: [Policy; 2] = [Policy::BestPerfq, Policy::BestReliability];

    /// Picks a cluster given the medoid objectives by cluster id.
    pub fn choose(self, medoids: &[ObjectiveVector]) -> usize {
        let best = |key: &dyn Fn(&ObjectiveVector) -> f64| {
            let mut pick = 0;
            for (i, m) in medoids.iter().enumerate() {
                if key(m) > key(&medoids[pick]) {
                    pick = i;
                }
            }
            pick
        };
        match self {
            Policy::BestPerfq => best(&|m| m.perfq),
            Policy::BestReliability => best(&|m| m.reliability),
            Policy::LowestCost => best(&|m| -m.cost),
            Policy::FewestAntipatterns => best(&|m| -(m.pas as f64)),
            Policy::Cluster(c) => c.min(medoids.len().saturating_sub(1)),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::BestPerfq => f.write_str("best-perfq"),
            Policy::BestReliability => f.write_str("best-reliability"),
            Policy::LowestCost => f.write_str("lowest-cost"),
            Policy::FewestAntipatterns => f.write_str("fewest-antipatterns"),
            Policy::Cluster(c) => write!(f, "cluster-{c}"),
        }
    }
}

impl FromStr for Policy {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || ExperimentError::Unknown {
            what: "policy",
            value: s.into(),
        };
        match s {
            "best-perfq" => Ok(Policy::BestPerfq),
            "best-reliability" => Ok(Policy::BestReliability),
            "lowest-cost" => Ok(Policy::LowestCost),
            "fewest-antipatterns" => Ok(Policy::FewestAntipatterns),
            _ => s
                .strip_prefix("cluster-")
                .and_then(|n| n.parse().ok())
                .map(Policy::Cluster)
                .ok_or_else(unknown),
        }
    }
}

impl Serialize for Policy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOptions {
    pub scale: Scale,
    /// Run sizes; starts as the scale's preset.
    pub spec: ScaleSpec,
    pub seed: u64,
    pub policies: Vec<Policy>,
    pub settings: EvalSettings,
    pub clustering: ClusterConfig,
}

impl ExperimentOptions {
    pub fn new(scale: Scale, seed: u64) -> Self {
        Self {
            scale,
            spec: scale.spec(),
            seed,
            policies: Policy::DEFAULT.to_vec(),
            settings: EvalSettings::default(),
            clustering: ClusterConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetrics {
    pub run: usize,
    pub nps: usize,
    pub hv: f64,
    pub igd_plus: f64,
    pub epsilon: f64,
    pub entropy: f64,
    pub tree_coverage: f64,
}

impl RunMetrics {
    pub fn get(&self, indicator: &str) -> f64 {
        match indicator {
            "nps" => self.nps as f64,
            "hv" => self.hv,
            "igd_plus" => self.igd_plus,
            "epsilon" => self.epsilon,
            "entropy" => self.entropy,
            "tree_coverage" => self.tree_coverage,
            _ => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub name: String,
    pub iterations: usize,
    pub runs: Vec<RunMetrics>,
    pub medians: std::collections::BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorComparison {
    pub indicator: String,
    pub median_a: f64,
    pub median_b: f64,
    pub p_value: f64,
    pub a12: f64,
    pub magnitude: Magnitude,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub a: String,
    pub b: String,
    pub indicators: Vec<IndicatorComparison>,
    /// Per run, share of b's front covered by a's front.
    pub coverage_ab: Vec<f64>,
    pub coverage_ba: Vec<f64>,
    pub coverage_ab_median: f64,
    pub coverage_ba_median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub experiment: String,
    pub run: usize,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Complete,
    Partial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub format: u32,
    pub model: String,
    pub scale: Scale,
    pub mapping: ScaleSpec,
    pub seed: u64,
    pub policies: Vec<Policy>,
    pub entropy_definition: &'static str,
    pub status: ReportStatus,
    pub failures: Vec<Failure>,
    pub reference_front_size: usize,
    pub experiments: Vec<ExperimentSummary>,
    pub comparisons: Vec<Comparison>,
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Reference front, bounds and sequence tree every run is measured against.
pub struct Yardstick {
    pub front: Vec<ObjectiveVector>,
    pub normalizer: Normalizer,
    pub normalized: Vec<Vec<f64>>,
    pub nadir: Vec<f64>,
    pub tree: SequenceTree,
}

impl Yardstick {
    pub fn new(reference_runs: &[&RunArchive]) -> Result<Self> {
        let pooled: Vec<ObjectiveVector> = reference_runs.iter().flat_map(|a| a.front()).collect();
        let front = non_dominated(&pooled);
        if front.is_empty() {
            return Err(ExperimentError::NoReference);
        }
        let tree = SequenceTree::from_sequences(reference_runs.iter().flat_map(|a| a.front_chromosomes()));
        Self::from_front(front, tree)
    }

    pub fn from_front(front: Vec<ObjectiveVector>, tree: SequenceTree) -> Result<Self> {
        let normalizer = Normalizer::from_reference(&front)?;
        let normalized = normalizer.front(&front).points;
        let nadir = nadir(&normalized)?;
        Ok(Self {
            front,
            normalizer,
            normalized,
            nadir,
            tree,
        })
    }

    /// Indicators of one front (and, when given, the solutions and
    /// sequences it was found among).
    pub fn measure(
        &self,
        run: usize,
        front: &[ObjectiveVector],
        solutions: &[ObjectiveVector],
        tree: Option<&SequenceTree>,
    ) -> Result<RunMetrics> {
        let f = self.normalizer.front(front).points;
        Ok(RunMetrics {
            run,
            nps: front.len(),
            hv: hypervolume(&f, &self.nadir)?.volume,
            igd_plus: igd_plus(&f, &self.normalized)?,
            epsilon: epsilon(&f, &self.normalized)?,
            entropy: entropy_tradeoff(if solutions.is_empty() { front } else { solutions })?,
            tree_coverage: tree.map_or(0.0, |t| tree_coverage(t, &self.tree)),
        })
    }
}

fn non_dominated(points: &[ObjectiveVector]) -> Vec<ObjectiveVector> {
    let mins: Vec<[f64; 4]> = points.iter().map(ObjectiveVector::to_min).collect();
    let mut out: Vec<ObjectiveVector> = Vec::new();
    for i in nondominated(&mins) {
        if !out.contains(&points[i]) {
            out.push(points[i]);
        }
    }
    out
}

fn feasible_solutions(run: &RunArchive) -> Vec<ObjectiveVector> {
    run.entries.iter().filter(|e| e.feasible).map(|e| e.objectives).collect()
}

fn explored_tree(run: &RunArchive) -> SequenceTree {
    SequenceTree::from_sequences(
        run.entries
            .iter()
            .filter(|e| e.feasible)
            .map(|e| e.chromosome.as_slice()),
    )
}

fn summarize(name: String, iterations: usize, runs: Vec<RunMetrics>) -> ExperimentSummary {
    let medians = INDICATORS
        .iter()
        .map(|&ind| {
            let v: Vec<f64> = runs.iter().map(|r| r.get(ind)).collect();
            (ind.to_string(), median(&v))
        })
        .collect();
    ExperimentSummary {
        name,
        iterations,
        runs,
        medians,
    }
}

fn search_config(spec: &ScaleSpec, iterations: usize, interactions: usize) -> SearchConfig {
    SearchConfig {
        population_size: spec.population_size,
        iterations,
        chromosome_length: spec.chromosome_length,
        interactions,
        independent_runs: spec.runs,
        ..Default::default()
    }
}

/// One scripted interactive run: the root is run, clustered, and then
/// expanded once per policy. Returns the tree and the child point of each
/// policy.
fn interactive_run(
    evaluator: &Evaluator,
    spec: &ScaleSpec,
    options: &ExperimentOptions,
    run: usize,
) -> archsteer_core::Result<(SessionTree, Vec<usize>)> {
    let search = search_config(spec, spec.baseline_iterations, spec.interactions);
    let mut tree = SessionTree::new(
        search,
        options.clustering.clone(),
        derive_seed(options.seed, &[3, run as u64]),
    )?;
    tree.run_point(evaluator, 0)?;
    let medoids: Vec<ObjectiveVector> = tree.medoids(0)?.into_iter().map(|(v, _)| v).collect();
    let mut children = Vec::with_capacity(options.policies.len());
    for policy in &options.policies {
        children.push(tree.expand(evaluator, 0, policy.choose(&medoids))?);
    }
    Ok((tree, children))
}

/// Raw archives of every run of an experiment, before measurement.
pub struct ExperimentRuns {
    pub reference: Vec<archsteer_core::Result<RunArchive>>,
    pub baseline: Vec<archsteer_core::Result<RunArchive>>,
    /// Session tree of each interactive run with the child point chosen by
    /// each policy.
    pub interactive: Vec<archsteer_core::Result<(SessionTree, Vec<usize>)>>,
}

pub fn experiment_runs(model: &ArchitectureModel, options: &ExperimentOptions) -> Result<ExperimentRuns> {
    let spec = options.spec.clone();
    spec.validate()?;
    let evaluator = Evaluator::new(model.clone(), options.settings.clone())?;
    let runs: Vec<usize> = (0..spec.runs).collect();

    let single = |salt: u64, iterations: usize| -> Vec<archsteer_core::Result<RunArchive>> {
        let cfg = search_config(&spec, iterations, 0);
        runs.par_iter()
            .map(|&r| {
                evolve_segment(
                    &evaluator,
                    &cfg,
                    &[],
                    iterations,
                    spec.chromosome_length,
                    derive_seed(options.seed, &[salt]),
                    r as u64,
                    &|_| {},
                )
            })
            .collect()
    };
    Ok(ExperimentRuns {
        reference: single(1, spec.reference_iterations),
        baseline: single(2, spec.baseline_iterations),
        interactive: runs
            .par_iter()
            .map(|&r| interactive_run(&evaluator, &spec, options, r))
            .collect(),
    })
}

/// Runs every experiment and compares each interactive policy with the
/// baseline. Individual run failures are recorded and leave the report
/// partial.
pub fn run_experiment(model: &ArchitectureModel, options: &ExperimentOptions) -> Result<ExperimentReport> {
    let spec = options.spec.clone();
    let ExperimentRuns {
        reference,
        baseline,
        interactive,
    } = experiment_runs(model, options)?;

    let mut failures = Vec::new();
    let mut keep = |name: &str, results: Vec<archsteer_core::Result<RunArchive>>| {
        let mut ok = Vec::new();
        for (r, res) in results.into_iter().enumerate() {
            match res {
                Ok(a) => ok.push((r, a)),
                Err(e) => failures.push(Failure {
                    experiment: name.to_string(),
                    run: r,
                    error: e.to_string(),
                }),
            }
        }
        ok
    };
    let reference_name = format!("reference-{}", spec.reference_iterations);
    let baseline_name = format!("baseline-{}", spec.baseline_iterations);
    let reference = keep(&reference_name, reference);
    let baseline = keep(&baseline_name, baseline);
    let mut per_policy: Vec<Vec<archsteer_core::Result<RunArchive>>> =
        options.policies.iter().map(|_| Vec::new()).collect();
    for res in interactive {
        match res {
            Ok((tree, children)) => {
                for (slot, c) in per_policy.iter_mut().zip(children) {
                    slot.push(Ok(tree.points[c].archive.clone().expect("expanded child is done")));
                }
            }
            Err(e) => {
                let msg = e.to_string();
                for slot in per_policy.iter_mut() {
                    slot.push(Err(archsteer_core::Error::Config(msg.clone())));
                }
            }
        }
    }
    let interactive_names: Vec<String> = options
        .policies
        .iter()
        .map(|p| format!("interactive-{p}"))
        .collect();
    let interactive: Vec<Vec<(usize, RunArchive)>> = per_policy
        .into_iter()
        .zip(&interactive_names)
        .map(|(res, name)| keep(name, res))
        .collect();

    let yardstick = Yardstick::new(&reference.iter().map(|(_, a)| a).collect::<Vec<_>>())?;
    let measure_all = |name: &str, archives: &[(usize, RunArchive)], failures: &mut Vec<Failure>| {
        let mut out = Vec::new();
        for (r, a) in archives {
            let tree = explored_tree(a);
            match yardstick.measure(*r, &a.front(), &feasible_solutions(a), Some(&tree)) {
                Ok(m) => out.push(m),
                Err(e) => failures.push(Failure {
                    experiment: name.to_string(),
                    run: *r,
                    error: e.to_string(),
                }),
            }
        }
        out
    };

    let mut experiments = vec![
        summarize(
            reference_name.clone(),
            spec.reference_iterations,
            measure_all(&reference_name, &reference, &mut failures),
        ),
        summarize(
            baseline_name.clone(),
            spec.baseline_iterations,
            measure_all(&baseline_name, &baseline, &mut failures),
        ),
    ];
    for (name, archives) in interactive_names.iter().zip(&interactive) {
        experiments.push(summarize(
            name.clone(),
            spec.segment_iterations,
            measure_all(name, archives, &mut failures),
        ));
    }

    let mut comparisons = Vec::new();
    for (k, name) in interactive_names.iter().enumerate() {
        comparisons.push(compare_experiments(
            &experiments[2 + k],
            &experiments[1],
            &interactive[k],
            &baseline,
        )?);
        debug_assert_eq!(&experiments[2 + k].name, name);
    }

    failures.sort_by(|a, b| (&a.experiment, a.run).cmp(&(&b.experiment, b.run)));
    Ok(ExperimentReport {
        format: REPORT_FORMAT,
        model: model.name.clone(),
        scale: options.scale,
        mapping: spec,
        seed: options.seed,
        policies: options.policies.clone(),
        entropy_definition: ENTROPY_DEFINITION,
        status: if failures.is_empty() {
            ReportStatus::Complete
        } else {
            ReportStatus::Partial
        },
        failures,
        reference_front_size: yardstick.front.len(),
        experiments,
        comparisons,
    })
}

fn compare_experiments(
    a: &ExperimentSummary,
    b: &ExperimentSummary,
    a_runs: &[(usize, RunArchive)],
    b_runs: &[(usize, RunArchive)],
) -> Result<Comparison> {
    let mut indicators = Vec::new();
    if !a.runs.is_empty() && !b.runs.is_empty() {
        for ind in INDICATORS {
            let xa: Vec<f64> = a.runs.iter().map(|r| r.get(ind)).collect();
            let xb: Vec<f64> = b.runs.iter().map(|r| r.get(ind)).collect();
            let s = compare(&xa, &xb)?;
            indicators.push(IndicatorComparison {
                indicator: ind.to_string(),
                median_a: median(&xa),
                median_b: median(&xb),
                p_value: s.p_value,
                a12: s.a12,
                magnitude: s.magnitude,
            });
        }
    }
    let mut coverage_ab = Vec::new();
    let mut coverage_ba = Vec::new();
    for (r, ia) in a_runs {
        let Some((_, ib)) = b_runs.iter().find(|(s, _)| s == r) else {
            continue;
        };
        let fa: Vec<[f64; 4]> = ia.front().iter().map(ObjectiveVector::to_min).collect();
        let fb: Vec<[f64; 4]> = ib.front().iter().map(ObjectiveVector::to_min).collect();
        if fa.is_empty() || fb.is_empty() {
            continue;
        }
        coverage_ab.push(coverage(&fa, &fb)?);
        coverage_ba.push(coverage(&fb, &fa)?);
    }
    Ok(Comparison {
        a: a.name.clone(),
        b: b.name.clone(),
        indicators,
        coverage_ab_median: median(&coverage_ab),
        coverage_ba_median: median(&coverage_ba),
        coverage_ab,
        coverage_ba,
    })
}

pub const RUNS_HEADER: [&str; 8] = [
    "experiment",
    "run",
    "nps",
    "hv",
    "igd_plus",
    "epsilon",
    "entropy",
    "tree_coverage",
];

pub const COMPARISONS_HEADER: [&str; 8] = [
    "experiment_a",
    "experiment_b",
    "indicator",
    "median_a",
    "median_b",
    "p_value",
    "a12",
    "magnitude",
];

fn magnitude_name(m: Magnitude) -> &'static str {
    match m {
        Magnitude::Negligible => "negligible",
        Magnitude::Small => "small",
        Magnitude::Medium => "medium",
        Magnitude::Large => "large",
    }
}

/// Writes `report.json`, `runs.csv` and `comparisons.csv` into `dir`.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut json = serde_json::to_string_pretty(report).expect("report serializes");
    json.push('\n');
    std::fs::write(dir.join("report.json"), json)?;

    let mut runs = csv::Writer::from_path(dir.join("runs.csv"))?;
    runs.write_record(RUNS_HEADER)?;
    for e in &report.experiments {
        for r in &e.runs {
            runs.write_record([
                e.name.clone(),
                r.run.to_string(),
                r.nps.to_string(),
                r.hv.to_string(),
                r.igd_plus.to_string(),
                r.epsilon.to_string(),
                r.entropy.to_string(),
                r.tree_coverage.to_string(),
            ])?;
        }
    }
    runs.flush()?;

    let mut cmp = csv::Writer::from_path(dir.join("comparisons.csv"))?;
    cmp.write_record(COMPARISONS_HEADER)?;
    for c in &report.comparisons {
        for i in &c.indicators {
            cmp.write_record([
                c.a.clone(),
                c.b.clone(),
                i.indicator.clone(),
                i.median_a.to_string(),
                i.median_b.to_string(),
                i.p_value.to_string(),
                i.a12.to_string(),
                magnitude_name(i.magnitude).to_string(),
            ])?;
        }
        if !c.coverage_ab.is_empty() {
            let s = compare(&c.coverage_ab, &c.coverage_ba)?;
            cmp.write_record([
                c.a.clone(),
                c.b.clone(),
                "coverage".to_string(),
                c.coverage_ab_median.to_string(),
                c.coverage_ba_median.to_string(),
                s.p_value.to_string(),
                s.a12.to_string(),
                magnitude_name(s.magnitude).to_string(),
            ])?;
        }
    }
    cmp.flush()?;
    Ok(())
}

/// Indicators of standalone fronts against a reference front.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisRow {
    pub name: String,
    pub nps: usize,
    pub hv: f64,
    pub igd_plus: f64,
    pub epsilon: f64,
    /// Share of the reference covered by the front.
    pub coverage_ab: f64,
    /// Share of the front covered by the reference.
    pub coverage_ba: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub format: u32,
    pub entropy_definition: &'static str,
    pub reference_front_size: usize,
    pub fronts: Vec<AnalysisRow>,
}

pub const ANALYSIS_HEADER: [&str; 8] = [
    "front",
    "nps",
    "hv",
    "igd_plus",
    "epsilon",
    "coverage_ab",
    "coverage_ba",
    "entropy",
];

pub fn analyze_fronts(
    fronts: &[(String, Vec<ObjectiveVector>)],
    reference: &[ObjectiveVector],
) -> Result<AnalysisReport> {
    let reference = non_dominated(reference);
    if reference.is_empty() {
        return Err(ExperimentError::NoReference);
    }
    let yard = Yardstick::from_front(reference, SequenceTree::default())?;
    let rmin: Vec<[f64; 4]> = yard.front.iter().map(ObjectiveVector::to_min).collect();
    let mut rows = Vec::new();
    for (name, raw) in fronts {
        let front = non_dominated(raw);
        let m = yard.measure(0, &front, raw, None)?;
        let fmin: Vec<[f64; 4]> = front.iter().map(ObjectiveVector::to_min).collect();
        rows.push(AnalysisRow {
            name: name.clone(),
            nps: m.nps,
            hv: m.hv,
            igd_plus: m.igd_plus,
            epsilon: m.epsilon,
            coverage_ab: coverage(&fmin, &rmin)?,
            coverage_ba: coverage(&rmin, &fmin)?,
            entropy: m.entropy,
        });
    }
    Ok(AnalysisReport {
        format: REPORT_FORMAT,
        entropy_definition: ENTROPY_DEFINITION,
        reference_front_size: yard.front.len(),
        fronts: rows,
    })
}

pub fn write_analysis_csv<W: std::io::Write>(report: &AnalysisReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ANALYSIS_HEADER)?;
    for r in &report.fronts {
        w.write_record([
            r.name.clone(),
            r.nps.to_string(),
            r.hv.to_string(),
            r.igd_plus.to_string(),
            r.epsilon.to_string(),
            r.coverage_ab.to_string(),
            r.coverage_ba.to_string(),
            r.entropy.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Objective vectors stored in a front file: either a bare list of
/// objective vectors or a run archive, whose archive front is used.
pub fn parse_front(text: &str) -> Result<Vec<ObjectiveVector>, String> {
    if let Ok(v) = serde_json::from_str::<Vec<ObjectiveVector>>(text) {
        return Ok(v);
    }
    if let Ok(a) = serde_json::from_str::<RunArchive>(text) {
        return Ok(a.front());
    }
    #[derive(Deserialize)]
    struct Wrapped {
        front: Vec<ObjectiveVector>,
    }
    serde_json::from_str::<Wrapped>(text)
        .map(|w| w.front)
        .map_err(|e| format!("not a list of objective vectors or a run archive: {e}"))
}
