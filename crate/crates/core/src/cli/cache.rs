//! On-disk memo of command outcomes.
//!
//! Entries live in `<dir>/<key>.json`, where the key hashes the crate
//! version together with the canonical command. A version bump therefore
//! misses every old entry.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::Outcome;

pub const CACHE_ENV: &str = "CP2Q_CACHE_DIR";

const SCHEMA: u32 = 1;

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the crate version and cache schema.
pub fn version_hash() -> String {
    let d =
        Sha256::digest(format!("cp2q {} schema {SCHEMA}", env!("CARGO_PKG_VERSION")).as_bytes());
    hex(&d[..8])
}

#[derive(Clone, Debug)]
pub struct ResultCache {
    dir: PathBuf,
}

impl ResultCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `--cache-dir` wins over the environment; neither means no cache.
    pub fn resolve(flag: Option<&Path>) -> Option<Self> {
        flag.map(Path::to_path_buf)
            .or_else(|| {
                std::env::var_os(CACHE_ENV)
                    .filter(|v| !v.is_empty())
                    .map(PathBuf::from)
            })
            .map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key<K: Serialize>(command: &K) -> String {
        let body = serde_json::to_string(command).expect("command serializes");
        let d = Sha256::digest(format!("{}\n{body}", version_hash()).as_bytes());
        hex(&d)
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A hit, or `None` on a miss or an unreadable entry.
    pub fn load(&self, key: &str) -> Option<Outcome> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(&self, key: &str, outcome: &Outcome) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(outcome).map_err(io::Error::other)?)?;
        fs::rename(tmp, self.path(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_keys() {
        let dir = tempfile::tempdir().unwrap();
        let c = ResultCache::new(dir.path());
        let o = Outcome {
            command: "rewrite".into(),
            passed: true,
            failures: vec![],
            result: serde_json::json!({"normal_form": "1"}),
            table: "1\n".into(),
            csv: "normal_form\n1\n".into(),
        };
        let k = ResultCache::key(&("rewrite", "p11"));
        assert_ne!(k, ResultCache::key(&("rewrite", "p12")));
        assert!(c.load(&k).is_none());
        c.store(&k, &o).unwrap();
        assert_eq!(c.load(&k).unwrap(), o);
        assert_eq!(version_hash().len(), 16);
    }
}
