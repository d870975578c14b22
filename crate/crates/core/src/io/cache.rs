//! On-disk cache of fusion tables, keyed by type, level and schema version,
//! with a SHA-256 checksum over the payload.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::export::{FusionTableJson, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::fusion::{FusionTable, Guards};
use crate::root_system::{CartanType, RootDatum};

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "VERLINDE_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub family: String,
    pub rank: usize,
    pub level: u32,
    pub checksum: String,
    pub payload: FusionTableJson,
}

fn checksum(payload: &FusionTableJson) -> String {
    let bytes = serde_json::to_vec(payload).expect("serializable");
    hex::encode(Sha256::digest(&bytes))
}

impl CacheEntry {
    pub fn new(table: &FusionTable) -> Self {
        let payload = FusionTableJson::from_table(table);
        let t = table.cartan_type();
        CacheEntry {
            schema_version: SCHEMA_VERSION,
            family: t.family().to_string(),
            rank: t.rank(),
            level: table.level(),
            checksum: checksum(&payload),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// Parses and verifies an entry against the expected key.
    pub fn verify(text: &str, t: CartanType, level: u32) -> std::result::Result<FusionTable, String> {
        let entry: CacheEntry = serde_json::from_str(text).map_err(|e| format!("unreadable entry: {e}"))?;
        if entry.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "schema version {} (expected {SCHEMA_VERSION})",
                entry.schema_version
            ));
        }
        if entry.family != t.family().to_string() || entry.rank != t.rank() || entry.level != level {
            return Err(format!(
                "key {}{} level {} does not match {t} level {level}",
                entry.family, entry.rank, entry.level
            ));
        }
        if checksum(&entry.payload) != entry.checksum {
            return Err("checksum mismatch".into());
        }
        let table = entry.payload.into_table().map_err(|e| e.to_string())?;
        if table.cartan_type() != t || table.level() != level {
            return Err("payload does not match its key".into());
        }
        Ok(table)
    }
}

/// Result of a cache lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(FusionTable),
    Miss,
    /// The entry exists but failed verification.
    Corrupt(String),
}

#[derive(Clone, Debug)]
pub struct FusionCache {
    dir: PathBuf,
}

impl FusionCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FusionCache { dir: dir.into() }
    }

    /// `$VERLINDE_CACHE_DIR`, else the platform cache directory, else a
    /// directory under the system temp dir.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os(CACHE_DIR_ENV) {
            return PathBuf::from(d);
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return PathBuf::from(d).join("verlinde");
        }
        if let Some(h) = std::env::var_os("HOME") {
            return PathBuf::from(h).join(".cache").join("verlinde");
        }
        std::env::temp_dir().join("verlinde-cache")
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, t: CartanType, level: u32) -> PathBuf {
        self.dir.join(format!(
            "fusion_{}{}_k{level}_v{SCHEMA_VERSION}.json",
            t.family(),
            t.rank()
        ))
    }

    pub fn load(&self, t: CartanType, level: u32) -> Lookup {
        let path = self.path_for(t, level);
        match fs::read_to_string(&path) {
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Lookup::Miss,
            Err(e) => Lookup::Corrupt(format!("{}: {e}", path.display())),
            Ok(text) => match CacheEntry::verify(&text, t, level) {
                Ok(table) => Lookup::Hit(table),
                Err(why) => Lookup::Corrupt(format!("{}: {why}", path.display())),
            },
        }
    }

    pub fn store(&self, table: &FusionTable) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)
            .map_err(|e| Error::Input(format!("cannot create cache dir {}: {e}", self.dir.display())))?;
        let path = self.path_for(table.cartan_type(), table.level());
        let tmp = path.with_extension("json.tmp");
        let write = |p: &Path| {
            fs::write(p, CacheEntry::new(table).to_json())
                .map_err(|e| Error::Input(format!("cannot write cache entry {}: {e}", p.display())))
        };
        write(&tmp)?;
        fs::rename(&tmp, &path)
            .map_err(|e| Error::Input(format!("cannot write cache entry {}: {e}", path.display())))?;
        Ok(path)
    }

    /// Loads the table or computes and stores it. Warnings about corrupt
    /// entries or unwritable caches are returned, not printed.
    pub fn get_or_compute(
        &self,
        datum: &RootDatum,
        level: u32,
        guards: Guards,
        parallel: bool,
    ) -> Result<(FusionTable, Vec<String>)> {
        let mut warnings = Vec::new();
        match self.load(datum.cartan_type(), level) {
            Lookup::Hit(t) => return Ok((t, warnings)),
            Lookup::Miss => {}
            Lookup::Corrupt(why) => warnings.push(format!("discarding cache entry ({why}); recomputing")),
        }
        let table = FusionTable::compute_with(datum, level, guards, parallel)?;
        if let Err(e) = self.store(&table) {
            warnings.push(format!("cache not updated: {e}"));
        }
        Ok((table, warnings))
    }
}
