//! On-disk cache of rank reports keyed by a hash of the request.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ranklab::verify::RankReport;

pub const CACHE_ENV: &str = "RANKLAB_CACHE";
pub const DEFAULT_DIR: &str = ".ranklab-cache";
pub const TOOL_VERSION: &str = concat!("ranklab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub tool_version: String,
    pub timestamp: u64,
    pub payload: RankReport,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        Cache { dir }
    }

    #[cfg(test)]
    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// Hex SHA-256 of the canonical request text.
    pub fn key(canonical: &str) -> String {
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A hit needs both the key and the tool version to match.
    pub fn get(&self, key: &str) -> Option<RankReport> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == key && entry.tool_version == TOOL_VERSION).then_some(entry.payload)
    }

    pub fn put(&self, key: &str, report: &RankReport) -> Result<()> {
        let target = self.path(key);
        if target.exists() {
            return Ok(());
        }
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating cache directory {}", self.dir.display()))?;
        let entry = CacheEntry {
            key: key.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            payload: report.clone(),
        };
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        write_file(&tmp, &serde_json::to_string(&entry)?)?;
        fs::rename(&tmp, &target).with_context(|| format!("renaming into {}", target.display()))?;
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(text.as_bytes())?;
    f.sync_all()?;
    Ok(())
}
