//! Optional on-disk cache for frieze counts: a single JSON file mapping
//! query keys to decimal count strings.  Lookups must be bit-identical to
//! recomputation; the verifier spot-checks that property.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

const CACHE_FILE: &str = "counts.json";

/// A persistent map from count-query keys to decimal count strings.
pub struct CountCache {
    file: PathBuf,
    map: BTreeMap<String, String>,
}

impl CountCache {
    /// Opens (or initialises) the cache stored inside `dir`.
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let file = dir.join(CACHE_FILE);
        let map = match fs::read_to_string(&file) {
            Ok(text) => serde_json::from_str(&text).map_err(|e| {
                io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("corrupt cache file {}: {e}", file.display()),
                )
            })?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e),
        };
        Ok(CountCache { file, map })
    }

    /// The canonical cache key for a count query.
    pub fn key(kind: &str, n: u64, m: u32, method: &str) -> String {
        format!("{kind}:n={n}:m={m}:{method}")
    }

    /// The cached decimal string for `key`, if any.
    pub fn lookup(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    /// Inserts `value` under `key` and persists the whole map.
    pub fn store(&mut self, key: &str, value: &str) -> io::Result<()> {
        self.map.insert(key.to_string(), value.to_string());
        let text = serde_json::to_string_pretty(&self.map).expect("string map serialises");
        fs::write(&self.file, text + "\n")
    }

    /// Number of cached entries.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    /// Whether the cache holds no entries.
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
