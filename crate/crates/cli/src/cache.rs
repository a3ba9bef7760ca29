//! On-disk cache of computed payloads.
//!
//! Each entry is a JSON envelope holding the key, the convention version and
//! a sha256 checksum of the payload text. Anything that fails to parse or
//! verify is reported and treated as a miss.

use std::cell::Cell;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::write_atomic;

#[derive(Serialize, Deserialize)]
struct Envelope {
    version: String,
    key: String,
    checksum: String,
    payload: String,
}

fn sha256_hex(s: &str) -> String {
    Sha256::digest(s.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    version: String,
    hits: Cell<usize>,
    misses: Cell<usize>,
    warnings: std::cell::RefCell<Vec<String>>,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>, version: impl Into<String>) -> Self {
        Self {
            dir: dir.into(),
            version: version.into(),
            hits: Cell::new(0),
            misses: Cell::new(0),
            warnings: Default::default(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn hits(&self) -> usize {
        self.hits.get()
    }

    pub fn misses(&self) -> usize {
        self.misses.get()
    }

    pub fn take_warnings(&self) -> Vec<String> {
        std::mem::take(&mut self.warnings.borrow_mut())
    }

    fn path(&self, key: &str) -> PathBuf {
        let name = sha256_hex(&format!("{}\n{}", self.version, key));
        self.dir.join(format!("{name}.json"))
    }

    fn warn(&self, msg: String) {
        eprintln!("warning: {msg}");
        self.warnings.borrow_mut().push(msg);
    }

    pub fn load(&self, key: &str) -> Option<Value> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => {
                self.misses.set(self.misses.get() + 1);
                return None;
            }
        };
        let found = serde_json::from_str::<Envelope>(&text)
            .ok()
            .filter(|e| e.version == self.version && e.key == key)
            .filter(|e| sha256_hex(&e.payload) == e.checksum)
            .and_then(|e| serde_json::from_str(&e.payload).ok());
        match found {
            Some(v) => {
                self.hits.set(self.hits.get() + 1);
                Some(v)
            }
            None => {
                self.warn(format!("corrupt cache entry {} ignored", path.display()));
                self.misses.set(self.misses.get() + 1);
                None
            }
        }
    }

    pub fn store(&self, key: &str, payload: &Value) {
        let payload = payload.to_string();
        let env = Envelope {
            version: self.version.clone(),
            key: key.to_string(),
            checksum: sha256_hex(&payload),
            payload,
        };
        let text = serde_json::to_string(&env).expect("envelope serializes");
        let path = self.path(key);
        if let Err(e) =
            fs::create_dir_all(&self.dir).and_then(|_| write_atomic(&path, text.as_bytes()))
        {
            self.warn(format!(
                "could not write cache entry {}: {e}",
                path.display()
            ));
        }
    }

    /// Returns the cached value for `key` or computes and stores it.
    pub fn get_or_insert<E>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<Value, E>,
    ) -> Result<Value, E> {
        if let Some(v) = self.load(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.store(key, &v);
        Ok(v)
    }
}
