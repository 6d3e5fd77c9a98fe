//! Persistent result cache: one JSON file per key, written via rename so
//! concurrent readers never see a partial file.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::envelope::Envelope;

pub const CACHE_ENV: &str = "BESSELMOMENTS_CACHE";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    created_at: u64,
    key: String,
    payload: Envelope,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$BESSELMOMENTS_CACHE`, else the platform cache directory.
    pub fn from_env() -> Option<Self> {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Some(Self::new(dir)),
            _ => dirs::cache_dir().map(|d| Self::new(d.join("besselmoments"))),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// SHA-256 over the operation, its canonical inputs and the digit count.
    pub fn key(op: &str, inputs: &BTreeMap<String, String>, digits: u32) -> String {
        #[derive(Serialize)]
        struct Canonical<'a> {
            digits: u32,
            inputs: &'a BTreeMap<String, String>,
            op: &'a str,
            version: u32,
        }
        let text = serde_json::to_string(&Canonical {
            digits,
            inputs,
            op,
            version: FORMAT_VERSION,
        })
        .expect("canonical key serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Entry for `key`, provided it was computed at exactly `digits`.
    pub fn get(&self, key: &str, digits: u32) -> Option<Envelope> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == key && entry.payload.precision_digits == digits).then_some(entry.payload)
    }

    pub fn put(&self, key: &str, payload: &Envelope) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let created_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let entry = CacheEntry {
            created_at,
            key: key.to_string(),
            payload: payload.clone(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}
