//! Bundled example models. Their numeric annotations are invented.

use crate::error::Result;
use crate::model::{load_model, ArchitectureModel};

pub const TTBS: &str = include_str!("../fixtures/ttbs.arch");
pub const COCOME: &str = include_str!("../fixtures/cocome.arch");
pub const HOTSPOT: &str = include_str!("../fixtures/hotspot.arch");
pub const BLOBBY: &str = include_str!("../fixtures/blobby.arch");

pub const ALL: [(&str, &str); 4] = [
    ("ttbs", TTBS),
    ("cocome", COCOME),
    ("hotspot", HOTSPOT),
    ("blobby", BLOBBY),
];

/// Loads a bundled model by name.
pub fn load(name: &str) -> Option<Result<ArchitectureModel>> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| load_model(text.as_bytes()))
}
