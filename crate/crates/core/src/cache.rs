//! Process-wide memo cache for evaluator outputs and its on-disk form.

use crate::error::Result;
use crate::numerics::ValueWithError;
use num_complex::Complex64;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;

pub const CACHE_SCHEMA_VERSION: u32 = 1;

/// Concurrent map from canonical keys to computed values.
///
/// Entries are deterministic functions of their key, so racing inserts of
/// the same key are harmless.
#[derive(Default)]
pub struct ValueCache {
    map: RwLock<HashMap<String, ValueWithError>>,
    disabled: AtomicBool,
}

static GLOBAL: OnceLock<ValueCache> = OnceLock::new();

/// The cache shared by all evaluators.
pub fn global() -> &'static ValueCache {
    GLOBAL.get_or_init(ValueCache::default)
}

impl ValueCache {
    pub fn set_enabled(&self, on: bool) {
        self.disabled.store(!on, Ordering::Relaxed);
    }

    pub fn enabled(&self) -> bool {
        !self.disabled.load(Ordering::Relaxed)
    }

    pub fn get(&self, key: &str) -> Option<ValueWithError> {
        if !self.enabled() {
            return None;
        }
        self.map.read().get(key).copied()
    }

    pub fn insert(&self, key: String, v: ValueWithError) {
        if self.enabled() && v.value.re.is_finite() && v.value.im.is_finite() && v.abs_err.is_finite() {
            self.map.write().insert(key, v);
        }
    }

    pub fn get_or_compute<F>(&self, key: String, f: F) -> Result<ValueWithError>
    where
        F: FnOnce() -> Result<ValueWithError>,
    {
        if let Some(v) = self.get(&key) {
            return Ok(v);
        }
        let v = f()?;
        self.insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().clear();
    }

    /// Copies the entries into the persistent representation.
    pub fn to_file(&self) -> CacheFile {
        let entries = self
            .map
            .read()
            .iter()
            .map(|(k, v)| {
                let acc = if v.accelerated { 1.0 } else { 0.0 };
                (k.clone(), [v.value.re, v.value.im, v.abs_err, v.terms_used as f64, acc])
            })
            .collect();
        CacheFile { schema_version: CACHE_SCHEMA_VERSION, entries }
    }

    /// Adds every entry of a persisted file.
    pub fn absorb(&self, file: &CacheFile) {
        let mut map = self.map.write();
        for (k, e) in &file.entries {
            map.insert(
                k.clone(),
                ValueWithError {
                    value: Complex64::new(e[0], e[1]),
                    abs_err: e[2],
                    terms_used: e[3] as u64,
                    accelerated: e[4] != 0.0,
                },
            );
        }
    }
}

/// On-disk cache: `key → [re, im, abs_err, terms_used, accelerated]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheFile {
    pub schema_version: u32,
    pub entries: BTreeMap<String, [f64; 5]>,
}

impl Default for CacheFile {
    fn default() -> Self {
        CacheFile { schema_version: CACHE_SCHEMA_VERSION, entries: BTreeMap::new() }
    }
}

/// Outcome of reading a cache file.
#[derive(Debug)]
pub struct CacheLoad {
    pub file: CacheFile,
    /// Set when the file existed but was unreadable or from another schema.
    pub warning: Option<String>,
}

impl CacheFile {
    /// Reads a cache file; absent, corrupt or version-mismatched files give
    /// an empty cache.
    pub fn load(path: &Path) -> CacheLoad {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return CacheLoad { file: CacheFile::default(), warning: None }
            }
            Err(e) => {
                return CacheLoad {
                    file: CacheFile::default(),
                    warning: Some(format!("cannot read cache {}: {e}", path.display())),
                }
            }
        };
        match serde_json::from_str::<CacheFile>(&text) {
            Ok(f) if f.schema_version != CACHE_SCHEMA_VERSION => CacheLoad {
                file: CacheFile::default(),
                warning: Some(format!(
                    "cache schema {} differs from {}; starting cold",
                    f.schema_version, CACHE_SCHEMA_VERSION
                )),
            },
            Ok(f) if f.entries.values().any(|e| e.iter().any(|x| !x.is_finite())) => CacheLoad {
                file: CacheFile::default(),
                warning: Some("cache holds non-finite values; starting cold".into()),
            },
            Ok(f) => CacheLoad { file: f, warning: None },
            Err(e) => CacheLoad {
                file: CacheFile::default(),
                warning: Some(format!("corrupt cache {}: {e}; starting cold", path.display())),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cache entries are finite")
    }

    /// Writes to a sibling temporary file and renames it into place.
    pub fn store(&self, path: &Path) -> std::io::Result<()> {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("cache");
        let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
        std::fs::write(&tmp, self.to_json())?;
        std::fs::rename(&tmp, path)
    }
}
