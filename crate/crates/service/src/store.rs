//! One JSON document per session, replaced atomically on every update.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use archsteer_core::config::RunConfig;
use archsteer_core::interaction::SessionTree;
use archsteer_core::model::ArchitectureModel;
use serde::{Deserialize, Serialize};

pub const SESSION_FORMAT: u32 = 1;

/// Readable documents, and the path and error of every unreadable one.
pub type Loaded = (Vec<SessionDocument>, Vec<(PathBuf, String)>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionDocument {
    pub format: u32,
    pub id: String,
    pub model: ArchitectureModel,
    pub config: RunConfig,
    pub tree: SessionTree,
    /// Unix seconds.
    pub created: u64,
    pub updated: u64,
}

pub fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[derive(Debug, Clone)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_of(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }

    /// Writes next to the target, syncs, then renames over it.
    pub fn save(&self, doc: &SessionDocument) -> std::io::Result<()> {
        let bytes = serde_json::to_vec(doc).expect("session document serializes");
        let target = self.path_of(&doc.id);
        let tmp = self.dir.join(format!(".{}.json.tmp", doc.id));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)
    }

    pub fn load(&self, id: &str) -> std::io::Result<SessionDocument> {
        let bytes = fs::read(self.path_of(id))?;
        serde_json::from_slice(&bytes).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    /// Every readable session document, sorted by id. Unreadable files are
    /// returned separately with their error.
    pub fn load_all(&self) -> std::io::Result<Loaded> {
        let mut docs = Vec::new();
        let mut bad = Vec::new();
        let mut paths: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension().is_some_and(|x| x == "json")
                    && !p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.'))
            })
            .collect();
        paths.sort();
        for p in paths {
            match fs::read(&p)
                .map_err(|e| e.to_string())
                .and_then(|b| serde_json::from_slice::<SessionDocument>(&b).map_err(|e| e.to_string()))
            {
                Ok(d) => docs.push(d),
                Err(e) => bad.push((p, e)),
            }
        }
        Ok((docs, bad))
    }
}
