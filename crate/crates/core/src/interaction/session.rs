//! The tree of interaction points explored by the designer.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cluster::{cluster_front, ClusterConfig, ClusterSet};
use super::labels::OrdinalLabel;
use crate::error::{Error, Result};
use crate::evaluation::{Evaluator, ObjectiveVector};
use crate::optimizer::{derive_seed, evolve_segment, RunArchive, SearchConfig};
use crate::refactoring::RefactoringAction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeStatus {
    Idle,
    Running,
    Done,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionPoint {
    pub id: usize,
    pub parent: Option<usize>,
    /// Cluster of the parent whose medoid this point continues.
    pub via_cluster: Option<usize>,
    pub depth: usize,
    pub frozen_prefix: Vec<RefactoringAction>,
    pub seed: u64,
    pub status: NodeStatus,
    /// Completed generations of the running segment.
    pub generation: usize,
    pub archive: Option<RunArchive>,
    /// Archive entry index of each clustered solution.
    pub clustered: Vec<usize>,
    pub clusters: Option<ClusterSet>,
    pub children: BTreeMap<usize, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Everything needed to run one point's segment, detached from the tree.
#[derive(Debug, Clone, PartialEq)]
pub struct PointJob {
    pub point: usize,
    pub prefix: Vec<RefactoringAction>,
    pub seed: u64,
    pub iterations: usize,
    pub genes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub archive: RunArchive,
    pub clustered: Vec<usize>,
    pub clusters: ClusterSet,
}

impl PointJob {
    pub fn run(
        &self,
        evaluator: &Evaluator,
        search: &SearchConfig,
        clustering: &ClusterConfig,
        progress: &(dyn Fn(usize) + Sync),
    ) -> Result<PointResult> {
        let archive = evolve_segment(
            evaluator,
            search,
            &self.prefix,
            self.iterations,
            self.genes,
            self.seed,
            0,
            progress,
        )?;
        let clustered: Vec<usize> = if clustering.full_archive {
            (0..archive.entries.len())
                .filter(|&i| archive.entries[i].feasible)
                .collect()
        } else {
            archive.archive_front.clone()
        };
        let objectives = archive.objectives_of(&clustered);
        let cfg = ClusterConfig {
            seed: derive_seed(self.seed, &[u64::MAX]),
            ..clustering.clone()
        };
        let clusters = cluster_front(&objectives, &cfg);
        Ok(PointResult {
            archive,
            clustered,
            clusters,
        })
    }
}

/// Summary row of one point, for tree listings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub id: usize,
    pub parent: Option<usize>,
    pub via_cluster: Option<usize>,
    pub depth: usize,
    pub status: NodeStatus,
    pub prefix_len: usize,
    pub nps: usize,
    /// Medoid label captions, by cluster id.
    pub labels: Vec<String>,
    pub child_slots: usize,
    pub children: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionTree {
    pub search: SearchConfig,
    pub clustering: ClusterConfig,
    pub seed: u64,
    pub points: Vec<InteractionPoint>,
}

impl SessionTree {
    /// A tree holding only the idle root.
    pub fn new(search: SearchConfig, clustering: ClusterConfig, seed: u64) -> Result<Self> {
        search.validate()?;
        let root = InteractionPoint {
            id: 0,
            parent: None,
            via_cluster: None,
            depth: 0,
            frozen_prefix: Vec::new(),
            seed: derive_seed(seed, &[0]),
            status: NodeStatus::Idle,
            generation: 0,
            archive: None,
            clustered: Vec::new(),
            clusters: None,
            children: BTreeMap::new(),
            error: None,
        };
        Ok(Self {
            search,
            clustering,
            seed,
            points: vec![root],
        })
    }

    pub fn point(&self, id: usize) -> Result<&InteractionPoint> {
        self.points.get(id).ok_or(Error::UnknownPoint(id))
    }

    fn point_mut(&mut self, id: usize) -> Result<&mut InteractionPoint> {
        self.points.get_mut(id).ok_or(Error::UnknownPoint(id))
    }

    pub fn job(&self, id: usize) -> Result<PointJob> {
        let p = self.point(id)?;
        let plan = self.search.plan()?;
        let seg = plan[p.depth];
        Ok(PointJob {
            point: id,
            prefix: p.frozen_prefix.clone(),
            seed: p.seed,
            iterations: seg.iterations,
            genes: seg.genes,
        })
    }

    pub fn mark_running(&mut self, id: usize) -> Result<()> {
        let p = self.point_mut(id)?;
        p.status = NodeStatus::Running;
        p.generation = 0;
        p.error = None;
        Ok(())
    }

    pub fn set_progress(&mut self, id: usize, generation: usize) -> Result<()> {
        self.point_mut(id)?.generation = generation;
        Ok(())
    }

    pub fn complete(&mut self, id: usize, result: PointResult) -> Result<()> {
        let p = self.point_mut(id)?;
        p.generation = result.archive.segment_iterations;
        p.archive = Some(result.archive);
        p.clustered = result.clustered;
        p.clusters = Some(result.clusters);
        p.status = NodeStatus::Done;
        Ok(())
    }

    pub fn fail(&mut self, id: usize, message: impl Into<String>) -> Result<()> {
        let p = self.point_mut(id)?;
        p.status = NodeStatus::Failed;
        p.error = Some(message.into());
        Ok(())
    }

    /// Points an interrupted process had started or scheduled become failed.
    pub fn fail_interrupted(&mut self) -> Vec<usize> {
        let mut ids = Vec::new();
        for p in &mut self.points {
            if matches!(p.status, NodeStatus::Running | NodeStatus::Idle) {
                p.status = NodeStatus::Failed;
                p.error = Some("interrupted".into());
                ids.push(p.id);
            }
        }
        ids
    }

    /// Creates (or returns) the child continuing `cluster`'s medoid. The
    /// flag is `true` when the child was created by this call.
    pub fn register_child(&mut self, id: usize, cluster: usize) -> Result<(usize, bool)> {
        let p = self.point(id)?;
        if p.depth >= self.search.interactions {
            return Err(Error::DepthExceeded {
                depth: p.depth,
                max: self.search.interactions,
            });
        }
        if p.status != NodeStatus::Done {
            return Err(Error::NotReady(id));
        }
        if let Some(&child) = p.children.get(&cluster) {
            return Ok((child, false));
        }
        let clusters = p.clusters.as_ref().ok_or(Error::NotReady(id))?;
        if cluster >= clusters.k {
            return Err(Error::UnknownCluster(cluster));
        }
        let archive = p.archive.as_ref().ok_or(Error::NotReady(id))?;
        let entry = &archive.entries[p.clustered[clusters.medoids[cluster]]];
        let child = InteractionPoint {
            id: self.points.len(),
            parent: Some(id),
            via_cluster: Some(cluster),
            depth: p.depth + 1,
            frozen_prefix: entry.chromosome.clone(),
            seed: derive_seed(p.seed, &[cluster as u64 + 1]),
            status: NodeStatus::Idle,
            generation: 0,
            archive: None,
            clustered: Vec::new(),
            clusters: None,
            children: BTreeMap::new(),
            error: None,
        };
        let child_id = child.id;
        self.points.push(child);
        self.points[id].children.insert(cluster, child_id);
        Ok((child_id, true))
    }

    /// Runs a point to completion in the calling thread.
    pub fn run_point(&mut self, evaluator: &Evaluator, id: usize) -> Result<()> {
        let job = self.job(id)?;
        self.mark_running(id)?;
        match job.run(evaluator, &self.search, &self.clustering, &|_| {}) {
            Ok(r) => self.complete(id, r),
            Err(e) => {
                self.fail(id, e.to_string())?;
                Err(e)
            }
        }
    }

    /// Synchronous expansion; re-expanding returns the existing child.
    pub fn expand(&mut self, evaluator: &Evaluator, id: usize, cluster: usize) -> Result<usize> {
        let (child, created) = self.register_child(id, cluster)?;
        if created {
            self.run_point(evaluator, child)?;
        }
        Ok(child)
    }

    /// Medoid objective vectors of a done point, by cluster id.
    pub fn medoids(&self, id: usize) -> Result<Vec<(ObjectiveVector, OrdinalLabel)>> {
        let p = self.point(id)?;
        let (Some(archive), Some(cs)) = (&p.archive, &p.clusters) else {
            return Err(Error::NotReady(id));
        };
        Ok(cs
            .medoids
            .iter()
            .zip(&cs.labels)
            .map(|(&m, l)| (archive.entries[p.clustered[m]].objectives, *l))
            .collect())
    }

    /// Preorder listing starting at the root.
    pub fn summary(&self) -> Vec<PointSummary> {
        let mut out = Vec::with_capacity(self.points.len());
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let p = &self.points[id];
            out.push(PointSummary {
                id,
                parent: p.parent,
                via_cluster: p.via_cluster,
                depth: p.depth,
                status: p.status,
                prefix_len: p.frozen_prefix.len(),
                nps: p.archive.as_ref().map_or(0, RunArchive::nps),
                labels: p
                    .clusters
                    .as_ref()
                    .map(|c| c.labels.iter().map(ToString::to_string).collect())
                    .unwrap_or_default(),
                child_slots: if p.depth < self.search.interactions {
                    p.clusters.as_ref().map_or(0, |c| c.k)
                } else {
                    0
                },
                children: p.children.clone(),
            });
            stack.extend(p.children.values().rev());
        }
        out
    }
}
