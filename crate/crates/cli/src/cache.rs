//! Flat-file series cache.
//!
//! Entries are keyed by a construction string and a precision and stored as
//! JSON. The cache is advisory: unreadable, foreign or outdated entries are
//! ignored and recomputed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use merohecke::{LaurentSeries, Result};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;
pub const ENV_VAR: &str = "MEROHECKE_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    format_version: u32,
    key: String,
    precision: i64,
    weight: i64,
    series: LaurentSeries,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn from_env() -> Self {
        let dir = std::env::var_os(ENV_VAR).filter(|d| !d.is_empty()).map(PathBuf::from);
        Cache { dir }
    }

    fn path(dir: &Path, key: &str, precision: i64) -> PathBuf {
        let hex: String = key.bytes().map(|b| format!("{b:02x}")).collect();
        dir.join(format!("v{FORMAT_VERSION}-{hex}-{precision}.json"))
    }

    fn load(&self, key: &str, precision: i64) -> Option<(i64, LaurentSeries)> {
        let dir = self.dir.as_ref()?;
        let text = fs::read_to_string(Self::path(dir, key, precision)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (e.format_version == FORMAT_VERSION && e.key == key && e.precision == precision).then_some((e.weight, e.series))
    }

    fn store(&self, key: &str, precision: i64, weight: i64, series: &LaurentSeries) -> std::io::Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir)?;
        let entry = Entry {
            format_version: FORMAT_VERSION,
            key: key.to_string(),
            precision,
            weight,
            series: series.clone(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.persist(Self::path(dir, key, precision)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Returns the cached `(weight, series)` or computes and stores it.
    pub fn get_or_compute(
        &self,
        key: &str,
        precision: i64,
        compute: impl FnOnce() -> Result<(i64, LaurentSeries)>,
    ) -> Result<(i64, LaurentSeries)> {
        if let Some(hit) = self.load(key, precision) {
            return Ok(hit);
        }
        let (weight, series) = compute()?;
        if let Err(e) = self.store(key, precision, weight, &series) {
            eprintln!("warning: could not write cache entry: {e}");
        }
        Ok((weight, series))
    }
}
