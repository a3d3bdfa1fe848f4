//! Report envelope and atomic file output. Every JSON report carries the
//! toolkit version and a hash of the effective configuration so runs can
//! be reproduced.

use anyhow::{Context, Result};
use exclusionkit_core::ToolkitConfig;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write as _;
use std::path::Path;

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub version: &'static str,
    pub config_sha256: String,
    pub report: T,
}

pub fn envelope<T: Serialize>(cfg: &ToolkitConfig, report: T) -> Envelope<T> {
    Envelope {
        version: exclusionkit_core::VERSION,
        config_sha256: config_hash(cfg),
        report,
    }
}

pub fn config_hash(cfg: &ToolkitConfig) -> String {
    let canonical = serde_json::to_vec(cfg).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(&canonical);
    format!("{:x}", hasher.finalize())
}

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Emit to `<out>/<name>` when an output directory is set, else stdout.
pub fn emit(out: &Option<std::path::PathBuf>, name: &str, contents: &str) -> Result<()> {
    match out {
        Some(dir) => write_atomic(&dir.join(name), contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
