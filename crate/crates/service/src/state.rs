use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use tokio::sync::Mutex;
use venue_core::{recommend, validate, ConferenceInstance, RecommendationSet};

use crate::error::ApiError;

/// A conference instance together with its full recommendation set.
#[derive(Debug)]
pub struct Snapshot {
    pub version: u64,
    pub conf: ConferenceInstance,
    pub recs: RecommendationSet,
}

impl Snapshot {
    fn build(version: u64, conf: ConferenceInstance) -> Result<Self, ApiError> {
        let violations = validate(&conf);
        if !violations.is_empty() {
            return Err(ApiError::Unprocessable(violations));
        }
        let recs = recommend(&conf).map_err(ApiError::from_engine)?;
        Ok(Self { version, conf, recs })
    }
}

/// Readers clone the current `Arc<Snapshot>`; writers queue on `writer`,
/// build a complete new snapshot and swap it in.
pub struct AppState {
    current: RwLock<Arc<Snapshot>>,
    writer: Mutex<()>,
    save_path: Option<PathBuf>,
}

impl AppState {
    pub fn new(conf: ConferenceInstance) -> Result<Self, ApiError> {
        Ok(Self {
            current: RwLock::new(Arc::new(Snapshot::build(1, conf)?)),
            writer: Mutex::new(()),
            save_path: None,
        })
    }

    /// Rewrite the dataset file at `path` after every accepted write.
    pub fn save_on_write(mut self, path: PathBuf) -> Self {
        self.save_path = Some(path);
        self
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().expect("snapshot lock poisoned").clone()
    }

    /// Applies `edit` to a copy of the current instance and publishes the
    /// result as the next version. `expected_version`, when given, must match
    /// the current version.
    pub async fn apply<F>(&self, expected_version: Option<u64>, edit: F) -> Result<Arc<Snapshot>, ApiError>
    where
        F: FnOnce(&mut ConferenceInstance) -> Result<(), ApiError>,
    {
        let _queue = self.writer.lock().await;
        let base = self.snapshot();
        if let Some(expected) = expected_version {
            if expected != base.version {
                return Err(ApiError::Conflict {
                    expected,
                    current: base.version,
                });
            }
        }
        let mut conf = base.conf.clone();
        edit(&mut conf)?;
        let next = Arc::new(Snapshot::build(base.version + 1, conf)?);
        if let Some(path) = &self.save_path {
            if let Err(e) = venue_core::dataset::save(&next.conf, path) {
                tracing::error!(error = %e, "save-on-write failed");
            }
        }
        *self.current.write().expect("snapshot lock poisoned") = next.clone();
        Ok(next)
    }
}
