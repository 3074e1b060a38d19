//! Evaluation toolkit for NURC-convention oral transcripts.
//!
//! The crate turns annotated transcripts into normalized scoring references,
//! scores ASR hypotheses with WER/CER, and slices the results by the
//! annotated phenomena (incomprehension, hearing hypothesis, voice overlap):
//!
//! ```text
//! manifest ──▶ parser ──▶ normalizer ──▶ metrics ──▶ ablation ──▶ report
//!                │             │             │
//!            span flags   token refs    WER/CER records
//! ```
//!
//! - [`parser`]: transcript files → utterance units with annotation spans.
//! - [`manifest`]: the corpus table driving batch runs.
//! - [`normalizer`]: the five-step cleanup producing scoring references.
//! - [`metrics`]: Levenshtein alignment, WER, CER, per-inquiry scoring.
//! - [`ablation`]: the four phenomenon case sets and their scores.
//! - [`report`]: grouped summaries, difficulty bands, CSV/JSON emission.
//!
//! Everything is pure and deterministic; batch callers can fan out by
//! inquiry and merge results in any order.

pub mod ablation;
pub mod error;
pub mod manifest;
pub mod metrics;
pub mod normalizer;
pub mod parser;
pub mod report;

pub use ablation::{build_cases, case_scores, pool_cases, CaseId, CaseSet, CaseSets};
pub use error::{
    ConfigError, ManifestError, MetricsError, NormalizeError, ParseError, ReportError,
};
pub use manifest::{Manifest, ManifestEntry};
pub use metrics::{
    cer, edit_distance, normalize_inquiry, score_inquiry, score_prepared, wer, Alignment,
    IgnoredUnit, InquiryScore, PooledScore, ScoreRecord, ScoreableUnit,
};
pub use normalizer::{
    collapse_spaces, normalize_hypothesis, normalize_raw, normalize_tokens, normalize_unit,
    strip_comments, strip_marks, Gender, IgnoreReason, Normalized, NormalizedText,
    NormalizerConfig,
};
pub use parser::{
    count_phenomena, detect_spans, parse_inquiry, AnnotationSpan, Genre, Inquiry, InquiryMeta,
    PhenomenonCounts, PhenomenonFlags, Quality, SpanKind, UtteranceUnit,
};
pub use report::{
    aggregate, comparison, wer_band, Band, GroupBy, GroupKey, InquiryReport, Locale,
    ReportFormat, ReportSummary, UnitReport,
};
