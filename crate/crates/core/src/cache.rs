//! On-disk cache for char-poly histograms, with block-level checkpoints.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::group::ReflectionGroup;
use crate::molien::{CharPolyHistogram, HistogramJob, HistogramOptions, LONG_RUN_THRESHOLD};
use crate::poly::UniPoly;
use crate::scalar::Scalar;

pub const CACHE_SCHEMA_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "COXHESS_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub group_label: String,
    pub cartan_hash: String,
    pub total: String,
    /// `[[coefficient strings of det(1 - t w)], count]`.
    pub entries: Vec<(Vec<String>, String)>,
    pub complete: bool,
    /// Top-level blocks already folded into `entries`.
    pub checkpoint: Vec<usize>,
}

impl CacheEntry {
    pub fn from_histogram(h: &CharPolyHistogram, datum: &CartanDatum, complete: bool, checkpoint: Vec<usize>) -> Self {
        CacheEntry {
            schema_version: CACHE_SCHEMA_VERSION,
            group_label: h.label.clone(),
            cartan_hash: datum.hash(),
            total: h.total.to_string(),
            entries: h
                .entries
                .iter()
                .map(|(k, c)| (k.coeffs().iter().map(Scalar::to_canonical).collect(), c.to_string()))
                .collect(),
            complete,
            checkpoint,
        }
    }

    /// Decodes the payload, checking that the counts add up to `total`.
    pub fn histogram(&self, datum: &CartanDatum) -> Result<CharPolyHistogram> {
        let corrupt = |what: String| Error::CorruptPayload(format!("{}: {what}", self.group_label));
        let mut h = CharPolyHistogram::empty(self.group_label.clone(), datum.field);
        for (key, count) in &self.entries {
            let coeffs = key
                .iter()
                .map(|s| Scalar::from_canonical(s).map(|x| x.promote(datum.field)))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| corrupt(e.to_string()))?;
            let c: u64 = count.parse().map_err(|_| corrupt(format!("bad count {count:?}")))?;
            h.add(UniPoly::new(coeffs), c);
        }
        let total: u64 = self.total.parse().map_err(|_| corrupt(format!("bad total {:?}", self.total)))?;
        if total != h.total {
            return Err(corrupt(format!("counts sum to {} but total is {total}", h.total)));
        }
        Ok(h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramCache {
    dir: PathBuf,
}

impl HistogramCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        HistogramCache { dir: dir.into() }
    }

    /// Cache rooted at `$COXHESS_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(HistogramCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, label: &str) -> PathBuf {
        self.dir.join(format!("{label}.histogram.json"))
    }

    /// `Ok(None)` when nothing is cached for this label.
    pub fn load(&self, datum: &CartanDatum) -> Result<Option<CacheEntry>> {
        let path = self.path_for(&datum.label);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Error::CorruptPayload(format!("{}: {e}", path.display())))?;
        let found = value.get("schema_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if found != CACHE_SCHEMA_VERSION {
            return Err(Error::SchemaMismatch { found, expected: CACHE_SCHEMA_VERSION });
        }
        let entry: CacheEntry =
            serde_json::from_value(value).map_err(|e| Error::CorruptPayload(format!("{}: {e}", path.display())))?;
        if entry.cartan_hash != datum.hash() || entry.group_label != datum.label {
            return Err(Error::HashMismatch { label: datum.label.clone() });
        }
        Ok(Some(entry))
    }

    /// Writes `entry` via a temporary file and an atomic rename.
    pub fn store(&self, entry: &CacheEntry) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&entry.group_label);
        let tmp = self.dir.join(format!(".{}.{}.tmp", entry.group_label, std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string_pretty(entry).expect("cache entry serializes").as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Stores a partial entry covering `done` blocks.
    pub fn checkpoint(&self, h: &CharPolyHistogram, datum: &CartanDatum, done: &BTreeSet<usize>) -> Result<()> {
        self.store(&CacheEntry::from_histogram(h, datum, false, done.iter().copied().collect()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CachedRunOptions {
    pub histogram: HistogramOptions,
    /// Blocks processed between checkpoints.
    pub chunk_blocks: usize,
    /// Stop (leaving a checkpoint) once this many blocks are done in total.
    pub stop_after_blocks: Option<usize>,
}

impl Default for CachedRunOptions {
    fn default() -> Self {
        CachedRunOptions { histogram: HistogramOptions::default(), chunk_blocks: 8, stop_after_blocks: None }
    }
}

/// Outcome of a cached histogram run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CachedHistogram {
    pub histogram: CharPolyHistogram,
    pub complete: bool,
    pub from_cache: bool,
    pub blocks_done: usize,
    pub block_count: usize,
}

/// Histogram for `g`, reusing and extending whatever the cache holds.
pub fn histogram_cached(g: &ReflectionGroup, cache: Option<&HistogramCache>, opts: CachedRunOptions) -> Result<CachedHistogram> {
    let job = HistogramJob::new(g)?;
    let datum = &g.datum;
    let block_count = job.block_count();
    let (mut h, mut done) = match cache.map(|c| c.load(datum)).transpose()?.flatten() {
        Some(entry) => {
            let h = entry.histogram(datum)?;
            if entry.complete {
                if h.total != job.order() {
                    return Err(Error::CorruptPayload(format!(
                        "{}: complete entry has total {} but the group order is {}",
                        datum.label,
                        h.total,
                        job.order()
                    )));
                }
                return Ok(CachedHistogram { histogram: h, complete: true, from_cache: true, blocks_done: block_count, block_count });
            }
            let done: BTreeSet<usize> = entry.checkpoint.iter().copied().collect();
            if done.iter().any(|&b| b >= block_count) {
                return Err(Error::CorruptPayload(format!("{}: checkpoint names a missing block", datum.label)));
            }
            (h, done)
        }
        None => (job.empty(), BTreeSet::new()),
    };
    if job.order() > LONG_RUN_THRESHOLD && !opts.histogram.allow_long {
        return Err(Error::BudgetExceeded { budget: LONG_RUN_THRESHOLD });
    }
    let todo: Vec<usize> = (0..block_count).filter(|b| !done.contains(b)).collect();
    for chunk in todo.chunks(opts.chunk_blocks.max(1)) {
        if opts.stop_after_blocks.is_some_and(|s| done.len() >= s) {
            break;
        }
        let part = job.run_blocks(chunk, opts.histogram.workers)?;
        h.merge(&part);
        done.extend(chunk.iter().copied());
        if let Some(c) = cache {
            if done.len() < block_count {
                c.checkpoint(&h, datum, &done)?;
            }
        }
    }
    let complete = done.len() == block_count;
    if complete {
        if h.total != job.order() {
            return Err(Error::ChainInconsistent(format!("enumerated {} elements, chain order {}", h.total, job.order())));
        }
        if let Some(c) = cache {
            c.store(&CacheEntry::from_histogram(&h, datum, true, Vec::new()))?;
        }
    }
    Ok(CachedHistogram { histogram: h, complete, from_cache: false, blocks_done: done.len(), block_count })
}
