//! On-disk result cache: one JSON file per key, named by a hash of the key.
//!
//! Every key includes [`CODE_HASH`], a hash of the library sources, so
//! entries written by other builds are never served. Writers take a lock
//! file per key; readers treat unparsable entries as misses.

use std::collections::HashMap;
use std::convert::Infallible;
use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::braid::{PiKey, PiPresentation, PresentationSource};

/// Hash of the sources this binary was built from.
pub const CODE_HASH: &str = env!("GW_CODE_HASH");

const LOCK_WAIT: Duration = Duration::from_secs(600);
const STALE_LOCK: Duration = Duration::from_secs(3600);

#[derive(Serialize, Deserialize)]
struct Envelope {
    version: String,
    kind: String,
    params: Value,
    value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcReport {
    pub removed: usize,
    pub kept: usize,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn age(path: &Path) -> Option<Duration> {
    let modified = fs::metadata(path).and_then(|m| m.modified()).ok()?;
    SystemTime::now().duration_since(modified).ok()
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$GW_CACHE`, or `.gw-cache/` in the working directory.
    pub fn from_env() -> Self {
        Cache::new(std::env::var_os("GW_CACHE").map_or_else(|| PathBuf::from(".gw-cache"), PathBuf::from))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, kind: &str, params: &Value) -> PathBuf {
        let mut h = Sha256::new();
        h.update(CODE_HASH);
        h.update([0]);
        h.update(kind);
        h.update([0]);
        h.update(params.to_string());
        let digest = hex::encode(h.finalize());
        self.dir.join(format!("{kind}-{}.json", &digest[..32]))
    }

    fn read<T: DeserializeOwned>(&self, path: &Path, kind: &str, params: &Value) -> Option<T> {
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == ErrorKind::NotFound => return None,
            Err(e) => {
                log::warn!("cache: cannot read {}: {e}", path.display());
                return None;
            }
        };
        let parsed = serde_json::from_slice::<Envelope>(&bytes)
            .ok()
            .filter(|env| env.version == CODE_HASH && env.kind == kind && &env.params == params)
            .and_then(|env| serde_json::from_value(env.value).ok());
        if parsed.is_none() {
            log::warn!("cache: corrupt entry {}, recomputing", path.display());
        }
        parsed
    }

    fn write<T: Serialize>(&self, path: &Path, kind: &str, params: &Value, value: &T) -> std::io::Result<()> {
        let env = Envelope {
            version: CODE_HASH.to_string(),
            kind: kind.to_string(),
            params: params.clone(),
            value: serde_json::to_value(value)?,
        };
        let tmp = path.with_extension(format!("{}.tmp", std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&serde_json::to_vec(&env)?)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    }

    fn lock(&self, path: &Path) -> Option<LockGuard> {
        if let Err(e) = fs::create_dir_all(&self.dir) {
            log::warn!("cache: cannot create {}: {e}", self.dir.display());
            return None;
        }
        let lock = path.with_extension("lock");
        let start = Instant::now();
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&lock) {
                Ok(_) => return Some(LockGuard(lock)),
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    if age(&lock).is_some_and(|a| a > STALE_LOCK) {
                        log::warn!("cache: removing stale lock {}", lock.display());
                        let _ = fs::remove_file(&lock);
                    } else if start.elapsed() > LOCK_WAIT {
                        log::warn!("cache: gave up waiting for {}", lock.display());
                        return None;
                    } else {
                        std::thread::sleep(Duration::from_millis(50));
                    }
                }
                Err(e) => {
                    log::warn!("cache: cannot lock {}: {e}", lock.display());
                    return None;
                }
            }
        }
    }

    /// The cached value for `(kind, params)`, or `compute()` stored under
    /// that key. Cache failures only cost recomputation.
    pub fn get_or_compute<T, E>(&self, kind: &str, params: &Value, compute: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        let path = self.path_for(kind, params);
        if let Some(v) = self.read(&path, kind, params) {
            return Ok(v);
        }
        let guard = self.lock(&path);
        // Another process may have filled the entry while we waited.
        if guard.is_some() && path.exists() {
            if let Some(v) = self.read(&path, kind, params) {
                return Ok(v);
            }
        }
        let value = compute()?;
        if guard.is_some() {
            if let Err(e) = self.write(&path, kind, params, &value) {
                log::warn!("cache: cannot write {}: {e}", path.display());
            }
        }
        Ok(value)
    }

    /// Removes entries from other builds, corrupt entries, stale locks and
    /// leftover temporary files; with `all`, everything.
    pub fn gc(&self, all: bool) -> std::io::Result<GcReport> {
        let mut report = GcReport { removed: 0, kept: 0 };
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(report),
            Err(e) => return Err(e),
        };
        let mut paths: Vec<PathBuf> = entries.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
        paths.sort();
        for path in paths {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let remove = all
                || if name.ends_with(".lock") {
                    age(&path).is_some_and(|a| a > STALE_LOCK)
                } else if name.ends_with(".tmp") {
                    true
                } else if name.ends_with(".json") {
                    fs::read(&path)
                        .ok()
                        .and_then(|b| serde_json::from_slice::<Envelope>(&b).ok())
                        .is_none_or(|env| env.version != CODE_HASH)
                } else {
                    false
                };
            if remove && path.is_file() {
                fs::remove_file(&path)?;
                report.removed += 1;
            } else {
                report.kept += 1;
            }
        }
        Ok(report)
    }
}

/// Presentations kept in memory and, when a cache is given, on disk.
pub struct CachedPresentations<'a> {
    cache: Option<&'a Cache>,
    map: HashMap<PiKey, Arc<PiPresentation>>,
}

impl<'a> CachedPresentations<'a> {
    pub fn new(cache: Option<&'a Cache>) -> Self {
        CachedPresentations {
            cache,
            map: HashMap::new(),
        }
    }
}

impl PresentationSource for CachedPresentations<'_> {
    fn presentation(&mut self, key: PiKey) -> Arc<PiPresentation> {
        if let Some(p) = self.map.get(&key) {
            return p.clone();
        }
        let p = match self.cache {
            Some(cache) => {
                let params = serde_json::to_value(key).expect("serializable key");
                let built: Result<PiPresentation, Infallible> =
                    cache.get_or_compute("presentation", &params, || Ok(PiPresentation::build(key)));
                built.unwrap_or_else(|e| match e {})
            }
            None => PiPresentation::build(key),
        };
        let p = Arc::new(p);
        self.map.insert(key, p.clone());
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warm_entries_are_served() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let params = serde_json::json!({"m": 3});
        let mut calls = 0;
        for _ in 0..2 {
            let v: Result<u32, Infallible> = cache.get_or_compute("t", &params, || {
                calls += 1;
                Ok(7)
            });
            assert_eq!(v.unwrap(), 7);
        }
        assert_eq!(calls, 1);
        // No lock files left behind.
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn corrupt_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let params = serde_json::json!({"m": 4});
        let path = cache.path_for("t", &params);
        fs::write(&path, b"{not json").unwrap();
        let v: Result<u32, Infallible> = cache.get_or_compute("t", &params, || Ok(9));
        assert_eq!(v.unwrap(), 9);
        let again: Result<u32, Infallible> = cache.get_or_compute("t", &params, || Ok(0));
        assert_eq!(again.unwrap(), 9);
    }

    #[test]
    fn gc_drops_foreign_versions() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let params = serde_json::json!({});
        let _: Result<u32, Infallible> = cache.get_or_compute("t", &params, || Ok(1));
        fs::write(dir.path().join("t-old.json"), br#"{"version":"x","kind":"t","params":{},"value":1}"#).unwrap();
        fs::write(dir.path().join("junk.json"), b"[").unwrap();
        assert_eq!(cache.gc(false).unwrap(), GcReport { removed: 2, kept: 1 });
        assert_eq!(cache.gc(true).unwrap(), GcReport { removed: 1, kept: 0 });
    }

    #[test]
    fn keys_separate_kinds_and_params() {
        let cache = Cache::new("x");
        let a = cache.path_for("e2", &serde_json::json!({"m": 3}));
        assert_ne!(a, cache.path_for("e2", &serde_json::json!({"m": 4})));
        assert_ne!(a, cache.path_for("chord", &serde_json::json!({"m": 3})));
    }
}
