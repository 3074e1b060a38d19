//! Shared batch machinery: error-to-exit-code mapping, upfront validation,
//! the parallel per-inquiry runner, the normalization cache and hypothesis
//! file loading.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use nurc_eval::error::{ConfigError, ManifestError};
use nurc_eval::manifest::ManifestEntry;
use nurc_eval::metrics::{IgnoredUnit, ScoreableUnit};
use nurc_eval::parser::PhenomenonCounts;
use nurc_eval::report::Locale;
use nurc_eval::{GroupBy, Manifest, MetricsError, NormalizerConfig};

use crate::CommonArgs;

/// Top-level failure, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Format(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn io(context: &str, error: impl std::fmt::Display) -> CliError {
        CliError::Io(format!("{context}: {error}"))
    }

    pub fn format(context: &str, error: impl std::fmt::Display) -> CliError {
        CliError::Format(format!("{context}: {error}"))
    }
}

impl From<ManifestError> for CliError {
    fn from(error: ManifestError) -> CliError {
        match error {
            ManifestError::Io(e) => CliError::Io(format!("manifest: {e}")),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(error: ConfigError) -> CliError {
        match error {
            ConfigError::Io(e) => CliError::Io(format!("config: {e}")),
            other => CliError::Format(other.to_string()),
        }
    }
}

/// Everything a batch command needs before touching any inquiry.
pub struct Batch {
    pub manifest: Manifest,
    pub cfg: NormalizerConfig,
    pub cfg_toml: String,
    pub out: PathBuf,
    pub strict: bool,
    pub locale: Locale,
    pub jobs: Option<usize>,
}

impl Batch {
    /// Loads config and manifest and validates every input path upfront, so
    /// a bad batch fails before producing partial outputs.
    pub fn prepare(common: &CommonArgs) -> Result<Batch, CliError> {
        let locale: Locale = common
            .locale
            .parse()
            .map_err(|e: String| CliError::Format("--locale".to_string() + ": " + &e))?;

        let cfg = match &common.config {
            None => NormalizerConfig::default(),
            Some(path) => NormalizerConfig::load(path)?,
        };
        let cfg_toml = cfg.to_toml_string();

        let manifest = Manifest::load(&common.manifest)?;
        for entry in &manifest.entries {
            if !entry.transcript_path.is_file() {
                return Err(CliError::Format(format!(
                    "manifest row {:?}: transcript {} does not exist",
                    entry.id,
                    entry.transcript_path.display()
                )));
            }
        }

        fs::create_dir_all(&common.out)
            .map_err(|e| CliError::io("creating output directory", e))?;

        Ok(Batch {
            manifest,
            cfg,
            cfg_toml,
            out: common.out.clone(),
            strict: common.strict,
            locale,
            jobs: common.jobs,
        })
    }

    /// Runs `work` once per manifest entry on a pool of `jobs` threads.
    /// Results come back in manifest order regardless of scheduling, so
    /// output bytes do not depend on the parallelism degree.
    pub fn run_parallel<T, F>(&self, work: F) -> Result<Vec<Result<T, InquiryFailure>>, CliError>
    where
        T: Send,
        F: Fn(&ManifestEntry) -> Result<T, InquiryFailure> + Sync,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
        let results: Vec<Result<T, InquiryFailure>> = pool.install(|| {
            self.manifest
                .entries
                .par_iter()
                .map(|entry| work(entry))
                .collect()
        });
        let mut failures = results.iter().filter_map(|r| r.as_ref().err());
        if let Some(broken) = failures.clone().find(|f| f.internal) {
            return Err(CliError::Internal(format!(
                "inquiry {:?}: {}",
                broken.inquiry_id, broken.message
            )));
        }
        if self.strict {
            if let Some(failure) = failures.next() {
                return Err(CliError::Format(format!(
                    "inquiry {:?}: {}",
                    failure.inquiry_id, failure.message
                )));
            }
        }
        Ok(results)
    }

    pub fn cache_dir(&self) -> PathBuf {
        self.out.join(".cache")
    }
}

/// One inquiry failed; the batch goes on unless --strict. Internal failures
/// (broken invariants, never bad input) abort the batch with exit 3.
#[derive(Debug, Clone)]
pub struct InquiryFailure {
    pub inquiry_id: String,
    pub message: String,
    pub internal: bool,
}

impl InquiryFailure {
    pub fn new(id: &str, message: impl std::fmt::Display) -> InquiryFailure {
        InquiryFailure {
            inquiry_id: id.to_string(),
            message: message.to_string(),
            internal: false,
        }
    }

    pub fn internal(id: &str, message: impl std::fmt::Display) -> InquiryFailure {
        InquiryFailure {
            internal: true,
            ..InquiryFailure::new(id, message)
        }
    }

    pub fn from_metrics(id: &str, error: MetricsError) -> InquiryFailure {
        match error {
            MetricsError::UnknownUnitId { .. } => InquiryFailure::new(id, error),
            MetricsError::EmptyReference => InquiryFailure::internal(id, error),
        }
    }
}

/// Prints the stderr failure summary and returns how many inquiries failed.
pub fn report_failures<T>(results: &[Result<T, InquiryFailure>]) -> usize {
    let mut failed = 0;
    for failure in results.iter().filter_map(|r| r.as_ref().err()) {
        failed += 1;
        eprintln!(
            "warning: inquiry {:?} skipped: {}",
            failure.inquiry_id, failure.message
        );
    }
    failed
}

/// Cached normalization of one transcript, keyed by content and config.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CachedNorm {
    pub unit_count: usize,
    pub phenomena: PhenomenonCounts,
    pub scoreable: Vec<ScoreableUnit>,
    pub ignored: Vec<IgnoredUnit>,
}

fn cache_key(cfg_toml: &str, transcript: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(cfg_toml.as_bytes());
    hasher.update([0]);
    hasher.update(transcript.as_bytes());
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(16);
    for byte in &digest[..8] {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

pub fn cache_path(cache_dir: &Path, id: &str, cfg_toml: &str, transcript: &str) -> PathBuf {
    cache_dir.join(format!("{id}-{}.norm.json", cache_key(cfg_toml, transcript)))
}

pub fn load_cached_norm(path: &Path) -> Option<CachedNorm> {
    let bytes = fs::read(path).ok()?;
    serde_json::from_slice(&bytes).ok()
}

pub fn store_cached_norm(path: &Path, cached: &CachedNorm) {
    // Cache writes are best-effort; a failed write only costs a recompute.
    if let Some(dir) = path.parent() {
        if fs::create_dir_all(dir).is_err() {
            return;
        }
    }
    if let Ok(bytes) = serde_json::to_vec(cached) {
        let tmp = path.with_extension("tmp");
        if fs::write(&tmp, bytes).is_ok() {
            let _ = fs::rename(&tmp, path);
        }
    }
}

/// Normalizes one transcript, going through the cache next to the outputs.
pub fn normalize_with_cache(
    batch: &Batch,
    entry: &ManifestEntry,
    transcript: &str,
) -> Result<CachedNorm, InquiryFailure> {
    let path = cache_path(&batch.cache_dir(), &entry.id, &batch.cfg_toml, transcript);
    if let Some(cached) = load_cached_norm(&path) {
        return Ok(cached);
    }
    let parsed = nurc_eval::parse_inquiry(transcript, &entry.id, entry.meta())
        .map_err(|e| InquiryFailure::new(&entry.id, e))?;
    let (scoreable, ignored) = nurc_eval::normalize_inquiry(&parsed.inquiry, &batch.cfg);
    let cached = CachedNorm {
        unit_count: parsed.inquiry.units.len(),
        phenomena: nurc_eval::count_phenomena(&parsed.inquiry),
        scoreable,
        ignored,
    };
    store_cached_norm(&path, &cached);
    Ok(cached)
}

pub fn read_transcript(entry: &ManifestEntry) -> Result<String, InquiryFailure> {
    let bytes = fs::read(&entry.transcript_path)
        .map_err(|e| InquiryFailure::new(&entry.id, format!("reading transcript: {e}")))?;
    String::from_utf8(bytes)
        .map_err(|e| InquiryFailure::new(&entry.id, format!("transcript is not UTF-8: {e}")))
}

/// Loads `<hyp_dir>/<id>.hyp`: `unit-id<TAB>text` per line. A missing file
/// is `Ok(None)` (the inquiry scores against empty hypotheses, flagged);
/// a malformed file fails the inquiry.
pub fn load_hypotheses(
    hyp_dir: &Path,
    id: &str,
) -> Result<Option<BTreeMap<usize, String>>, InquiryFailure> {
    let path = hyp_dir.join(format!("{id}.hyp"));
    if !path.is_file() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path)
        .map_err(|e| InquiryFailure::new(id, format!("reading {}: {e}", path.display())))?;
    let mut hypotheses = BTreeMap::new();
    for (number, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |detail: &str| {
            InquiryFailure::new(
                id,
                format!("{} line {}: {detail}", path.display(), number + 1),
            )
        };
        let (unit_id, hyp) = line
            .split_once('\t')
            .ok_or_else(|| bad("expected unit-id<TAB>text"))?;
        let unit_id: usize = unit_id
            .parse()
            .map_err(|_| bad("unit id is not a non-negative integer"))?;
        if hypotheses.insert(unit_id, hyp.to_string()).is_some() {
            return Err(bad(&format!("duplicate unit id {unit_id}")));
        }
    }
    Ok(Some(hypotheses))
}

/// Parses the repeatable --group-by flag; empty means the default set.
pub fn parse_groupings(values: &[String]) -> Result<Vec<GroupBy>, CliError> {
    if values.is_empty() {
        return Ok(vec![
            GroupBy::Inquiry,
            GroupBy::Genre,
            GroupBy::Quality,
            GroupBy::All,
        ]);
    }
    let mut groupings = Vec::new();
    for value in values {
        let grouping: GroupBy = value
            .parse()
            .map_err(|e: String| CliError::Format(format!("--group-by: {e}")))?;
        if !groupings.contains(&grouping) {
            groupings.push(grouping);
        }
    }
    Ok(groupings)
}

pub fn write_out(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}
