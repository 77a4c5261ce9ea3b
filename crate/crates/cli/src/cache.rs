//! Result cache: a JSON object mapping canonical request strings to the
//! exact output text. Access is guarded by an exclusive `PATH.lock` file.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};

pub struct Cache {
    path: PathBuf,
    lock: PathBuf,
    entries: BTreeMap<String, String>,
    dirty: bool,
}

#[derive(Debug)]
pub enum CacheError {
    Locked(PathBuf),
    Io(io::Error),
    Corrupt(String),
}

impl std::fmt::Display for CacheError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CacheError::Locked(p) => write!(f, "cache is locked ({} exists)", p.display()),
            CacheError::Io(e) => write!(f, "cache i/o: {e}"),
            CacheError::Corrupt(e) => write!(f, "cache file is not a JSON object of strings: {e}"),
        }
    }
}

impl Cache {
    pub fn open(path: &Path) -> Result<Cache, CacheError> {
        let mut lock = path.as_os_str().to_owned();
        lock.push(".lock");
        let lock = PathBuf::from(lock);
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => {}
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                return Err(CacheError::Locked(lock))
            }
            Err(e) => return Err(CacheError::Io(e)),
        }
        let mut cache = Cache {
            path: path.to_path_buf(),
            lock,
            entries: BTreeMap::new(),
            dirty: false,
        };
        match fs::read_to_string(path) {
            Ok(text) if text.trim().is_empty() => {}
            Ok(text) => {
                cache.entries =
                    serde_json::from_str(&text).map_err(|e| CacheError::Corrupt(e.to_string()))?
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(CacheError::Io(e)),
        }
        Ok(cache)
    }

    pub fn get(&self, key: &str) -> Option<&String> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, key: String, value: String) {
        self.entries.insert(key, value);
        self.dirty = true;
    }

    pub fn save(&mut self) -> Result<(), CacheError> {
        if !self.dirty {
            return Ok(());
        }
        let mut tmp = self.path.as_os_str().to_owned();
        tmp.push(".tmp");
        let text = serde_json::to_string_pretty(&self.entries).expect("string map");
        fs::write(&tmp, text).map_err(CacheError::Io)?;
        fs::rename(&tmp, &self.path).map_err(CacheError::Io)?;
        self.dirty = false;
        Ok(())
    }
}

impl Drop for Cache {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}
