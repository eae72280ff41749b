//! Designer interaction: ordinal labels, clustering of intermediate fronts
//! and the tree of interaction points.

mod cluster;
mod labels;
mod session;

pub use cluster::{
    cluster_front, k_medoids, medoid_of, pairwise_distances, silhouette, standardize,
    ClusterConfig, ClusterSet,
};
pub use labels::{
    discretize, discretize_with, equal_width_level, Discretization, OrdinalLabel, VOCABULARY,
};
pub use session::{InteractionPoint, NodeStatus, PointJob, PointResult, PointSummary, SessionTree};
