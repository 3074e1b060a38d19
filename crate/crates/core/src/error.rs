//! Error types shared across the crate.

use thiserror::Error;

/// Transcript parsing failures. Recoverable oddities (unbalanced delimiters,
/// unknown marks) are diagnostics, not errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("transcript {id:?} has no non-blank lines")]
    EmptyFile { id: String },
}

/// Corpus manifest failures.
#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("malformed manifest (row {row}): {detail}")]
    Malformed { row: usize, detail: String },
    #[error("manifest i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("manifest table: {0}")]
    Csv(#[from] csv::Error),
}

/// Normalizer configuration failures.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{table} entry {entry:?} is not a lowercase Portuguese token")]
    InvalidEntry { table: &'static str, entry: String },
    #[error("canonical form {canonical:?} is itself remapped to {target:?}")]
    RemappedCanonical { canonical: String, target: String },
    #[error("letter-name table has no entry for {letter:?}")]
    MissingLetter { letter: char },
    #[error("config parse: {0}")]
    Toml(#[from] Box<toml::de::Error>),
    #[error("config i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Normalization failures that make a unit unusable for scoring.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("number {literal:?} is out of the expandable range")]
    NumberOutOfRange { literal: String },
}

/// Scoring failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("reference is empty; the unit should have been ignored upstream")]
    EmptyReference,
    #[error("hypothesis entry for unknown unit id {unit_id}")]
    UnknownUnitId { unit_id: usize },
}

/// Aggregation and report emission failures.
#[derive(Debug, Error)]
pub enum ReportError {
    #[error("records reference inquiry {id:?} absent from the manifest")]
    UnknownInquiry { id: String },
    #[error("report i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("report table: {0}")]
    Csv(#[from] csv::Error),
    #[error("report json: {0}")]
    Json(#[from] serde_json::Error),
}
