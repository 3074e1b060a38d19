//! Aggregation of per-unit scores into grouped summaries, and their
//! persistence as delimiter-separated tables (human-facing) or
//! structured JSON records (machine-facing, lossless round trip).

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ablation::{build_cases, CaseId};
use crate::error::ReportError;
use crate::manifest::Manifest;
use crate::metrics::{InquiryScore, PooledScore, ScoreRecord};
use crate::parser::{Genre, PhenomenonCounts, PhenomenonFlags, Quality};

/// Grouping selector for summaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupBy {
    Inquiry,
    Genre,
    Quality,
    Case,
    All,
}

impl GroupBy {
    pub const ALL: [GroupBy; 5] = [
        GroupBy::Inquiry,
        GroupBy::Genre,
        GroupBy::Quality,
        GroupBy::Case,
        GroupBy::All,
    ];
}

impl fmt::Display for GroupBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupBy::Inquiry => "inquiry",
            GroupBy::Genre => "genre",
            GroupBy::Quality => "quality",
            GroupBy::Case => "case",
            GroupBy::All => "all",
        })
    }
}

impl FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inquiry" => Ok(GroupBy::Inquiry),
            "genre" => Ok(GroupBy::Genre),
            "quality" => Ok(GroupBy::Quality),
            "case" => Ok(GroupBy::Case),
            "all" => Ok(GroupBy::All),
            other => Err(format!(
                "unknown grouping {other:?} (expected inquiry, genre, quality, case or all)"
            )),
        }
    }
}

/// Key of one summary group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum GroupKey {
    All,
    Inquiry(String),
    Genre(Genre),
    Quality(Quality),
    Case(CaseId),
}

impl GroupKey {
    pub fn kind(&self) -> &'static str {
        match self {
            GroupKey::All => "all",
            GroupKey::Inquiry(_) => "inquiry",
            GroupKey::Genre(_) => "genre",
            GroupKey::Quality(_) => "quality",
            GroupKey::Case(_) => "case",
        }
    }

    pub fn value(&self) -> String {
        match self {
            GroupKey::All => "all".to_string(),
            GroupKey::Inquiry(id) => id.clone(),
            GroupKey::Genre(genre) => genre.to_string(),
            GroupKey::Quality(quality) => quality.to_string(),
            GroupKey::Case(case) => case.to_string(),
        }
    }
}

/// Difficulty band of a pooled WER, per the half-open intervals
/// [0, 0.3), [0.3, 0.8) and [0.8, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Easy,
    Moderate,
    Hard,
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::Easy => "easy",
            Band::Moderate => "moderate",
            Band::Hard => "hard",
        })
    }
}

/// Bands a WER value. Total and monotone.
pub fn wer_band(wer: f64) -> Band {
    if wer < 0.3 {
        Band::Easy
    } else if wer < 0.8 {
        Band::Moderate
    } else {
        Band::Hard
    }
}

/// Per-unit slice of an inquiry's records file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitReport {
    pub flags: PhenomenonFlags,
    pub phenomena: PhenomenonCounts,
    pub record: ScoreRecord,
}

/// One inquiry's scored results plus the manifest metadata needed to group
/// them. This is the element type of the records file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InquiryReport {
    pub inquiry_id: String,
    pub run_label: String,
    pub genre: Genre,
    pub quality: Quality,
    /// Whole-inquiry annotation census (all units, ignored included).
    pub phenomena: PhenomenonCounts,
    pub ignored_count: usize,
    /// Scoreable units only, in unit order.
    pub units: Vec<UnitReport>,
}

impl InquiryReport {
    pub fn new(
        genre: Genre,
        quality: Quality,
        run_label: &str,
        phenomena: PhenomenonCounts,
        score: InquiryScore,
    ) -> InquiryReport {
        let units = score
            .scoreable
            .into_iter()
            .zip(score.records)
            .map(|(unit, record)| UnitReport {
                flags: unit.flags,
                phenomena: unit.phenomena,
                record,
            })
            .collect();
        InquiryReport {
            inquiry_id: score.inquiry_id,
            run_label: run_label.to_string(),
            genre,
            quality,
            phenomena,
            ignored_count: score.ignored.len(),
            units,
        }
    }
}

/// Aggregated metrics of one group. Numerators and denominators are stored,
/// so every pooled value can be re-derived and groups merge associatively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub group: GroupKey,
    /// 1-based position when sorted by pooled WER ascending; data-free
    /// groups have no rank.
    pub rank: Option<u32>,
    pub pool: PooledScore,
    pub ignored_count: usize,
    pub flagged_count: usize,
    pub phenomena: PhenomenonCounts,
}

impl ReportSummary {
    fn empty(group: GroupKey) -> ReportSummary {
        ReportSummary {
            group,
            rank: None,
            pool: PooledScore::default(),
            ignored_count: 0,
            flagged_count: 0,
            phenomena: PhenomenonCounts::default(),
        }
    }

    pub fn has_data(&self) -> bool {
        self.pool.ref_tokens > 0
    }

    pub fn pooled_wer(&self) -> Option<f64> {
        self.pool.pooled_wer()
    }

    pub fn macro_wer(&self) -> Option<f64> {
        self.pool.macro_wer()
    }

    pub fn pooled_cer(&self) -> Option<f64> {
        self.pool.pooled_cer()
    }

    pub fn macro_cer(&self) -> Option<f64> {
        self.pool.macro_cer()
    }

    pub fn band(&self) -> Option<Band> {
        self.pooled_wer().map(wer_band)
    }

    /// Folds another group into this one (the group key is kept).
    pub fn merge(&mut self, other: &ReportSummary) {
        self.pool.merge(&other.pool);
        self.ignored_count += other.ignored_count;
        self.flagged_count += other.flagged_count;
        self.phenomena.merge(&other.phenomena);
    }

    fn add_unit(&mut self, unit: &UnitReport) {
        self.pool.add_record(&unit.record);
        self.flagged_count += usize::from(unit.record.flagged);
    }
}

/// Groups records into summaries, sorted by pooled WER ascending with an
/// explicit rank column; groups without data follow, unranked. Every
/// inquiry in `reports` must appear in the manifest.
pub fn aggregate(
    reports: &[InquiryReport],
    manifest: &Manifest,
    group_by: GroupBy,
) -> Result<Vec<ReportSummary>, ReportError> {
    for report in reports {
        if manifest.get(&report.inquiry_id).is_none() {
            return Err(ReportError::UnknownInquiry {
                id: report.inquiry_id.clone(),
            });
        }
    }

    let mut groups: BTreeMap<GroupKey, ReportSummary> = BTreeMap::new();
    if group_by == GroupBy::Case {
        // All four cases are reported even when empty.
        for case in CaseId::ALL {
            let key = GroupKey::Case(case);
            groups.insert(key.clone(), ReportSummary::empty(key));
        }
    }
    for report in reports {
        match group_by {
            GroupBy::Case => {
                let flags: Vec<(usize, PhenomenonFlags)> = report
                    .units
                    .iter()
                    .map(|u| (u.record.unit_index, u.flags))
                    .collect();
                let cases = build_cases(&flags);
                let by_index: BTreeMap<usize, &UnitReport> = report
                    .units
                    .iter()
                    .map(|u| (u.record.unit_index, u))
                    .collect();
                for set in &cases.sets {
                    let summary = groups
                        .get_mut(&GroupKey::Case(set.case_id))
                        .expect("pre-seeded");
                    summary.ignored_count += report.ignored_count;
                    for index in &set.unit_indices {
                        let unit = by_index[index];
                        summary.add_unit(unit);
                        summary.phenomena.merge(&unit.phenomena);
                    }
                }
            }
            _ => {
                let key = match group_by {
                    GroupBy::All => GroupKey::All,
                    GroupBy::Inquiry => GroupKey::Inquiry(report.inquiry_id.clone()),
                    GroupBy::Genre => GroupKey::Genre(report.genre),
                    GroupBy::Quality => GroupKey::Quality(report.quality),
                    GroupBy::Case => unreachable!(),
                };
                let summary = groups
                    .entry(key.clone())
                    .or_insert_with(|| ReportSummary::empty(key));
                summary.ignored_count += report.ignored_count;
                summary.phenomena.merge(&report.phenomena);
                for unit in &report.units {
                    summary.add_unit(unit);
                }
            }
        }
    }

    let (mut ranked, mut unranked): (Vec<ReportSummary>, Vec<ReportSummary>) = groups
        .into_values()
        .partition(|summary| summary.has_data());
    ranked.sort_by(|a, b| {
        let (wa, wb) = (a.pooled_wer().unwrap(), b.pooled_wer().unwrap());
        wa.total_cmp(&wb).then_with(|| a.group.cmp(&b.group))
    });
    for (i, summary) in ranked.iter_mut().enumerate() {
        summary.rank = Some(i as u32 + 1);
    }
    unranked.sort_by(|a, b| a.group.cmp(&b.group));
    ranked.extend(unranked);
    Ok(ranked)
}

/// Float rendering locale for the delimiter-separated outputs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Locale {
    /// Period decimal separator, comma field delimiter.
    #[default]
    Machine,
    /// Comma decimal separator, semicolon field delimiter.
    Pt,
}

impl FromStr for Locale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "machine" => Ok(Locale::Machine),
            "pt" => Ok(Locale::Pt),
            other => Err(format!("unknown locale {other:?} (expected machine or pt)")),
        }
    }
}

impl Locale {
    pub fn delimiter(self) -> u8 {
        match self {
            Locale::Machine => b',',
            Locale::Pt => b';',
        }
    }

    /// Fixed three-decimal rendering; `NA` when there is no data.
    pub fn float(self, value: Option<f64>) -> String {
        match value {
            None => "NA".to_string(),
            Some(v) => {
                let text = format!("{v:.3}");
                match self {
                    Locale::Machine => text,
                    Locale::Pt => text.replace('.', ","),
                }
            }
        }
    }
}

/// Output format of [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Writes summaries to a file. Output bytes are a pure function of the
/// input: stable ordering and fixed decimal formatting.
pub fn emit(
    summaries: &[ReportSummary],
    format: ReportFormat,
    path: &Path,
    locale: Locale,
) -> Result<(), ReportError> {
    let file = std::fs::File::create(path)?;
    let mut writer = io::BufWriter::new(file);
    match format {
        ReportFormat::Csv => emit_csv(summaries, &mut writer, locale),
        ReportFormat::Json => emit_json(summaries, &mut writer),
    }
}

pub const SUMMARY_HEADER: [&str; 18] = [
    "group_kind",
    "group",
    "rank",
    "pooled_wer",
    "macro_wer",
    "pooled_cer",
    "macro_cer",
    "band",
    "unit_count",
    "ignored_count",
    "flagged_count",
    "ref_tokens",
    "word_edits",
    "ref_chars",
    "char_edits",
    "overlap_spans",
    "incomprehension_spans",
    "hypothesis_spans",
];

pub fn emit_csv<W: io::Write>(
    summaries: &[ReportSummary],
    writer: W,
    locale: Locale,
) -> Result<(), ReportError> {
    let mut csv = csv::WriterBuilder::new()
        .delimiter(locale.delimiter())
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    csv.write_record(SUMMARY_HEADER)?;
    for summary in summaries {
        let rank = summary
            .rank
            .map_or_else(|| "NA".to_string(), |r| r.to_string());
        let band = summary
            .band()
            .map_or_else(|| "NA".to_string(), |b| b.to_string());
        csv.write_record([
            summary.group.kind().to_string(),
            summary.group.value(),
            rank,
            locale.float(summary.pooled_wer()),
            locale.float(summary.macro_wer()),
            locale.float(summary.pooled_cer()),
            locale.float(summary.macro_cer()),
            band,
            summary.pool.unit_count.to_string(),
            summary.ignored_count.to_string(),
            summary.flagged_count.to_string(),
            summary.pool.ref_tokens.to_string(),
            summary.pool.word_edits.to_string(),
            summary.pool.ref_chars.to_string(),
            summary.pool.char_edits.to_string(),
            summary.phenomena.overlap.to_string(),
            summary.phenomena.incomprehension.to_string(),
            summary.phenomena.hypothesis.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn emit_json<W: io::Write>(summaries: &[ReportSummary], mut writer: W) -> Result<(), ReportError> {
    serde_json::to_writer_pretty(&mut writer, summaries)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn load_json<R: io::Read>(reader: R) -> Result<Vec<ReportSummary>, ReportError> {
    Ok(serde_json::from_reader(reader)?)
}

/// Writes the per-unit records file (JSON array of [`InquiryReport`]).
pub fn write_records<W: io::Write>(
    reports: &[InquiryReport],
    mut writer: W,
) -> Result<(), ReportError> {
    serde_json::to_writer_pretty(&mut writer, reports)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_records<R: io::Read>(reader: R) -> Result<Vec<InquiryReport>, ReportError> {
    Ok(serde_json::from_reader(reader)?)
}

/// One run's row in the cross-run comparison: pooled (WER, CER) per inquiry
/// column plus the all-inquiries pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub run_label: String,
    pub cells: Vec<(Option<f64>, Option<f64>)>,
    pub all: (Option<f64>, Option<f64>),
}

/// Cross-run comparison table: one row per run label, one (WER, CER) column
/// pair per inquiry, an overall column, and a final mean row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub inquiry_ids: Vec<String>,
    pub rows: Vec<ComparisonRow>,
    pub average: ComparisonRow,
}

/// Builds the comparison from records of one or more runs. Run labels keep
/// first-seen order; inquiry columns follow manifest order.
pub fn comparison(
    reports: &[InquiryReport],
    manifest: &Manifest,
) -> Result<ComparisonTable, ReportError> {
    let mut labels: Vec<String> = Vec::new();
    for report in reports {
        if manifest.get(&report.inquiry_id).is_none() {
            return Err(ReportError::UnknownInquiry {
                id: report.inquiry_id.clone(),
            });
        }
        if !labels.contains(&report.run_label) {
            labels.push(report.run_label.clone());
        }
    }
    let inquiry_ids: Vec<String> = manifest
        .entries
        .iter()
        .filter(|e| reports.iter().any(|r| r.inquiry_id == e.id))
        .map(|e| e.id.clone())
        .collect();

    let mut rows = Vec::new();
    for label in &labels {
        let of_run: Vec<&InquiryReport> =
            reports.iter().filter(|r| &r.run_label == label).collect();
        let mut all = PooledScore::default();
        let cells: Vec<(Option<f64>, Option<f64>)> = inquiry_ids
            .iter()
            .map(|id| {
                let mut pool = PooledScore::default();
                for report in of_run.iter().filter(|r| &r.inquiry_id == id) {
                    for unit in &report.units {
                        pool.add_record(&unit.record);
                    }
                }
                all.merge(&pool);
                (pool.pooled_wer(), pool.pooled_cer())
            })
            .collect();
        rows.push(ComparisonRow {
            run_label: label.clone(),
            cells,
            all: (all.pooled_wer(), all.pooled_cer()),
        });
    }

    let mean = |values: Vec<Option<f64>>| -> Option<f64> {
        let present: Vec<f64> = values.into_iter().flatten().collect();
        (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64)
    };
    let column_count = inquiry_ids.len();
    let average = ComparisonRow {
        run_label: "average".to_string(),
        cells: (0..column_count)
            .map(|i| {
                (
                    mean(rows.iter().map(|r| r.cells[i].0).collect()),
                    mean(rows.iter().map(|r| r.cells[i].1).collect()),
                )
            })
            .collect(),
        all: (
            mean(rows.iter().map(|r| r.all.0).collect()),
            mean(rows.iter().map(|r| r.all.1).collect()),
        ),
    };

    Ok(ComparisonTable {
        inquiry_ids,
        rows,
        average,
    })
}

/// Writes the comparison as a delimiter-separated table.
pub fn emit_comparison_csv<W: io::Write>(
    table: &ComparisonTable,
    writer: W,
    locale: Locale,
) -> Result<(), ReportError> {
    let mut csv = csv::WriterBuilder::new()
        .delimiter(locale.delimiter())
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let mut header = vec!["run".to_string()];
    for id in &table.inquiry_ids {
        header.push(format!("{id}_wer"));
        header.push(format!("{id}_cer"));
    }
    header.push("all_wer".to_string());
    header.push("all_cer".to_string());
    csv.write_record(&header)?;
    for row in table.rows.iter().chain(std::iter::once(&table.average)) {
        let mut record = vec![row.run_label.clone()];
        for &(wer, cer) in &row.cells {
            record.push(locale.float(wer));
            record.push(locale.float(cer));
        }
        record.push(locale.float(row.all.0));
        record.push(locale.float(row.all.1));
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}
