//! Levenshtein alignment and the WER/CER measures built on it.
//!
//! All edit operations cost 1. WER divides by the reference token count and
//! may exceed 1.0; CER runs the same alignment over the characters of the
//! single-space-joined token strings, spaces included, so word-boundary
//! errors count.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::normalizer::{
    normalize_hypothesis, normalize_unit, IgnoreReason, Normalized, NormalizerConfig,
};
use crate::parser::{Inquiry, PhenomenonCounts, PhenomenonFlags};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditOp {
    Hit,
    Substitute,
    Delete,
    Insert,
}

/// One backtraced alignment step. A deletion has no hypothesis index, an
/// insertion no reference index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignStep {
    pub op: EditOp,
    pub ref_index: Option<usize>,
    pub hyp_index: Option<usize>,
}

/// Minimal-cost alignment between a reference and a hypothesis sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alignment {
    pub hits: usize,
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub ops: Vec<AlignStep>,
}

impl Alignment {
    /// Total edits: S + D + I, the WER/CER numerator.
    pub fn edits(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }
}

/// Unit-cost Levenshtein alignment with backtrace.
///
/// Ties break by preferring hit > substitution > deletion > insertion, so
/// the operation list is deterministic.
pub fn edit_distance<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> Alignment {
    let n = reference.len();
    let m = hypothesis.len();
    let width = m + 1;
    let mut dp = vec![0u32; (n + 1) * width];
    for i in 0..=n {
        dp[i * width] = i as u32;
    }
    for j in 0..=m {
        dp[j] = j as u32;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = dp[(i - 1) * width + j - 1]
                + u32::from(reference[i - 1] != hypothesis[j - 1]);
            let del = dp[(i - 1) * width + j] + 1;
            let ins = dp[i * width + j - 1] + 1;
            dp[i * width + j] = sub.min(del).min(ins);
        }
    }

    let mut alignment = Alignment::default();
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let cur = dp[i * width + j];
        if i > 0 && j > 0 && reference[i - 1] == hypothesis[j - 1] && cur == dp[(i - 1) * width + j - 1] {
            alignment.hits += 1;
            ops.push(AlignStep {
                op: EditOp::Hit,
                ref_index: Some(i - 1),
                hyp_index: Some(j - 1),
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && cur == dp[(i - 1) * width + j - 1] + 1 {
            alignment.substitutions += 1;
            ops.push(AlignStep {
                op: EditOp::Substitute,
                ref_index: Some(i - 1),
                hyp_index: Some(j - 1),
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && cur == dp[(i - 1) * width + j] + 1 {
            alignment.deletions += 1;
            ops.push(AlignStep {
                op: EditOp::Delete,
                ref_index: Some(i - 1),
                hyp_index: None,
            });
            i -= 1;
        } else {
            alignment.insertions += 1;
            ops.push(AlignStep {
                op: EditOp::Insert,
                ref_index: None,
                hyp_index: Some(j - 1),
            });
            j -= 1;
        }
    }
    ops.reverse();
    alignment.ops = ops;

    debug_assert_eq!(alignment.hits + alignment.substitutions + alignment.deletions, n);
    debug_assert_eq!(alignment.hits + alignment.substitutions + alignment.insertions, m);
    alignment
}

/// Word error rate: (S + D + I) / |reference|.
pub fn wer<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> Result<f64, MetricsError> {
    if reference.is_empty() {
        return Err(MetricsError::EmptyReference);
    }
    let alignment = edit_distance(reference, hypothesis);
    Ok(alignment.edits() as f64 / reference.len() as f64)
}

/// Character error rate over single-space-joined token strings.
pub fn cer<S: AsRef<str>>(reference: &[S], hypothesis: &[S]) -> Result<f64, MetricsError> {
    let join = |tokens: &[S]| -> Vec<char> {
        let mut chars = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            if i > 0 {
                chars.push(' ');
            }
            chars.extend(tok.as_ref().chars());
        }
        chars
    };
    let ref_chars = join(reference);
    if ref_chars.is_empty() {
        return Err(MetricsError::EmptyReference);
    }
    let hyp_chars = join(hypothesis);
    let alignment = edit_distance(&ref_chars, &hyp_chars);
    Ok(alignment.edits() as f64 / ref_chars.len() as f64)
}

/// Per-unit scoring result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub unit_index: usize,
    pub wer: f64,
    pub cer: f64,
    pub ref_token_count: usize,
    pub hyp_token_count: usize,
    pub char_errors: usize,
    pub ref_char_count: usize,
    /// True when the unit was scored against an empty hypothesis because
    /// none was supplied (or the supplied one was unusable).
    pub flagged: bool,
    pub alignment: Alignment,
}

/// Numerators and denominators for pooled and macro metrics. Merging is
/// associative and order-independent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PooledScore {
    pub unit_count: usize,
    pub word_edits: usize,
    pub ref_tokens: usize,
    pub char_edits: usize,
    pub ref_chars: usize,
    pub wer_sum: f64,
    pub cer_sum: f64,
}

impl PooledScore {
    pub fn add_record(&mut self, record: &ScoreRecord) {
        self.unit_count += 1;
        self.word_edits += record.alignment.edits();
        self.ref_tokens += record.ref_token_count;
        self.char_edits += record.char_errors;
        self.ref_chars += record.ref_char_count;
        self.wer_sum += record.wer;
        self.cer_sum += record.cer;
    }

    pub fn merge(&mut self, other: &PooledScore) {
        self.unit_count += other.unit_count;
        self.word_edits += other.word_edits;
        self.ref_tokens += other.ref_tokens;
        self.char_edits += other.char_edits;
        self.ref_chars += other.ref_chars;
        self.wer_sum += other.wer_sum;
        self.cer_sum += other.cer_sum;
    }

    /// Micro-average: total edits over total reference tokens. `None` when
    /// the pool is empty.
    pub fn pooled_wer(&self) -> Option<f64> {
        (self.ref_tokens > 0).then(|| self.word_edits as f64 / self.ref_tokens as f64)
    }

    /// Macro-average: mean of per-unit WER.
    pub fn macro_wer(&self) -> Option<f64> {
        (self.unit_count > 0).then(|| self.wer_sum / self.unit_count as f64)
    }

    pub fn pooled_cer(&self) -> Option<f64> {
        (self.ref_chars > 0).then(|| self.char_edits as f64 / self.ref_chars as f64)
    }

    pub fn macro_cer(&self) -> Option<f64> {
        (self.unit_count > 0).then(|| self.cer_sum / self.unit_count as f64)
    }
}

/// A unit that survived normalization, with what ablation and reporting need
/// to know about it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreableUnit {
    pub index: usize,
    pub flags: PhenomenonFlags,
    pub phenomena: PhenomenonCounts,
    pub tokens: Vec<String>,
}

/// A unit dropped from the test set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IgnoredUnit {
    pub index: usize,
    #[serde(flatten)]
    pub reason: IgnoreReason,
}

/// Scoring result for a whole inquiry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InquiryScore {
    pub inquiry_id: String,
    pub records: Vec<ScoreRecord>,
    pub scoreable: Vec<ScoreableUnit>,
    pub ignored: Vec<IgnoredUnit>,
    pub pooled: PooledScore,
    pub flagged_count: usize,
}

/// Splits an inquiry's units into scoreable references and ignored units.
pub fn normalize_inquiry(
    inquiry: &Inquiry,
    cfg: &NormalizerConfig,
) -> (Vec<ScoreableUnit>, Vec<IgnoredUnit>) {
    let mut scoreable = Vec::new();
    let mut ignored = Vec::new();
    for unit in &inquiry.units {
        match normalize_unit(unit, cfg) {
            Normalized::Text(text) => scoreable.push(ScoreableUnit {
                index: unit.index,
                flags: unit.flags,
                phenomena: PhenomenonCounts::of_unit(unit),
                tokens: text.tokens,
            }),
            Normalized::Ignored { reason, .. } => ignored.push(IgnoredUnit {
                index: unit.index,
                reason,
            }),
        }
    }
    (scoreable, ignored)
}

/// Scores every non-ignored unit of an inquiry against the hypothesis map
/// (keys are 0-based unit indices).
///
/// A missing hypothesis scores as all deletions and flags the record; a
/// hypothesis for a unit index the inquiry does not have is an error. When
/// `normalize_hyps` is false, hypothesis text is compared as whitespace
/// tokens, verbatim.
pub fn score_inquiry(
    inquiry: &Inquiry,
    hypotheses: &BTreeMap<usize, String>,
    cfg: &NormalizerConfig,
    normalize_hyps: bool,
) -> Result<InquiryScore, MetricsError> {
    let (scoreable, ignored) = normalize_inquiry(inquiry, cfg);
    score_prepared(
        &inquiry.id,
        inquiry.units.len(),
        scoreable,
        ignored,
        hypotheses,
        cfg,
        normalize_hyps,
    )
}

/// Scores already-normalized references, e.g. restored from a cache.
/// `unit_count` is the total unit count of the inquiry (scoreable plus
/// ignored), used to reject hypothesis ids that point nowhere.
pub fn score_prepared(
    inquiry_id: &str,
    unit_count: usize,
    scoreable: Vec<ScoreableUnit>,
    ignored: Vec<IgnoredUnit>,
    hypotheses: &BTreeMap<usize, String>,
    cfg: &NormalizerConfig,
    normalize_hyps: bool,
) -> Result<InquiryScore, MetricsError> {
    if let Some(&unit_id) = hypotheses.keys().find(|&&k| k >= unit_count) {
        return Err(MetricsError::UnknownUnitId { unit_id });
    }

    let mut records = Vec::with_capacity(scoreable.len());
    let mut pooled = PooledScore::default();
    let mut flagged_count = 0;
    for unit in &scoreable {
        let (hyp_tokens, flagged) = match hypotheses.get(&unit.index) {
            None => (Vec::new(), true),
            Some(text) if normalize_hyps => match normalize_hypothesis(text, cfg) {
                Ok(normalized) => (normalized.tokens, false),
                Err(_) => (Vec::new(), true),
            },
            Some(text) => (
                text.split_whitespace().map(str::to_string).collect(),
                false,
            ),
        };
        let record = score_unit(unit.index, &unit.tokens, &hyp_tokens, flagged)?;
        flagged_count += usize::from(flagged);
        pooled.add_record(&record);
        records.push(record);
    }

    Ok(InquiryScore {
        inquiry_id: inquiry_id.to_string(),
        records,
        scoreable,
        ignored,
        pooled,
        flagged_count,
    })
}

/// Scores one unit's token lists.
pub fn score_unit(
    unit_index: usize,
    ref_tokens: &[String],
    hyp_tokens: &[String],
    flagged: bool,
) -> Result<ScoreRecord, MetricsError> {
    if ref_tokens.is_empty() {
        return Err(MetricsError::EmptyReference);
    }
    let alignment = edit_distance(ref_tokens, hyp_tokens);
    let wer = alignment.edits() as f64 / ref_tokens.len() as f64;

    let ref_chars: Vec<char> = ref_tokens.join(" ").chars().collect();
    let hyp_chars: Vec<char> = hyp_tokens.join(" ").chars().collect();
    let char_alignment = edit_distance(&ref_chars, &hyp_chars);
    let char_errors = char_alignment.edits();
    let cer = char_errors as f64 / ref_chars.len() as f64;

    Ok(ScoreRecord {
        unit_index,
        wer,
        cer,
        ref_token_count: ref_tokens.len(),
        hyp_token_count: hyp_tokens.len(),
        char_errors,
        ref_char_count: ref_chars.len(),
        flagged,
        alignment,
    })
}
