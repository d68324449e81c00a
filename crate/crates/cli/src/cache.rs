//! Content-addressed result cache. Entries are written to a temporary file
//! in the cache directory and renamed into place, so concurrent processes
//! never observe a partial entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    digest: String,
    payload: String,
}

pub enum Lookup {
    Hit(String),
    Miss,
    /// Present but unreadable or failing its digest.
    Corrupt(String),
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    /// Key of a canonical JSON description of the computation.
    pub fn key(description: &Value) -> String {
        sha256_hex(description.to_string().as_bytes())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Lookup {
        let path = self.path(key);
        let Ok(bytes) = fs::read(&path) else {
            return Lookup::Miss;
        };
        match serde_json::from_slice::<Entry>(&bytes) {
            Ok(e) if e.key == key && e.digest == sha256_hex(e.payload.as_bytes()) => Lookup::Hit(e.payload),
            Ok(_) => Lookup::Corrupt(format!("cache entry {} failed its digest check", path.display())),
            Err(err) => Lookup::Corrupt(format!("cache entry {} unreadable: {err}", path.display())),
        }
    }

    pub fn put(&self, key: &str, payload: &str) -> std::io::Result<()> {
        let entry = Entry { key: key.to_string(), digest: sha256_hex(payload.as_bytes()), payload: payload.to_string() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}
