//! Parser for NURC-convention transcript files.
//!
//! A transcript is UTF-8 text with one utterance unit per line, optionally
//! prefixed by `SPEAKER:<TAB>`. Units carry the annotation marks of the oral
//! transcription convention:
//!
//! ```text
//! ((comment))   annotator commentary, never reference text
//! ( )           incomprehension of words or segments
//! (text)        hypothesis of what was heard
//! [             overlapping voices, to `]` or end of unit
//! ::            vowel/consonant lengthening
//! ...           pause
//! ```
//!
//! Parsing is pure and deterministic; parsed structures are immutable and
//! safe to share across threads.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// Text genre of an inquiry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Genre {
    /// Formal elocution (lectures, conference talks).
    #[serde(rename = "EF")]
    Ef,
    /// Documented interview.
    #[serde(rename = "DID")]
    Did,
    /// Dialogue between two speakers.
    #[serde(rename = "D2")]
    D2,
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Genre::Ef => "EF",
            Genre::Did => "DID",
            Genre::D2 => "D2",
        })
    }
}

impl FromStr for Genre {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "EF" => Ok(Genre::Ef),
            "DID" => Ok(Genre::Did),
            "D2" => Ok(Genre::D2),
            other => Err(format!("unknown genre {other:?} (expected EF, DID or D2)")),
        }
    }
}

/// Audio-quality class of an inquiry: `+`, `-` or `Mixed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quality {
    #[serde(rename = "+")]
    Good,
    #[serde(rename = "-")]
    Bad,
    #[serde(rename = "Mixed")]
    Mixed,
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quality::Good => "+",
            Quality::Bad => "-",
            Quality::Mixed => "Mixed",
        })
    }
}

impl FromStr for Quality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "+" | "good" | "Good" => Ok(Quality::Good),
            "-" | "bad" | "Bad" => Ok(Quality::Bad),
            "Mixed" | "mixed" => Ok(Quality::Mixed),
            other => Err(format!("unknown quality {other:?} (expected +, - or Mixed)")),
        }
    }
}

/// Kind of an annotation span found inside a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanKind {
    Comment,
    Incomprehension,
    Hypothesis,
    Overlap,
    Lengthening,
    Pause,
}

/// One annotation mark, as a byte range into the unit's raw text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationSpan {
    pub kind: SpanKind,
    pub start: usize,
    pub end: usize,
}

impl AnnotationSpan {
    fn new(kind: SpanKind, start: usize, end: usize) -> Self {
        debug_assert!(start < end);
        AnnotationSpan { kind, start, end }
    }
}

/// Which of the three phenomena of interest a unit exhibits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhenomenonFlags {
    pub incomprehension: bool,
    pub hypothesis: bool,
    pub overlap: bool,
}

impl PhenomenonFlags {
    pub fn any(&self) -> bool {
        self.incomprehension || self.hypothesis || self.overlap
    }

    /// Folds span kinds into flags. Comment, lengthening and pause marks set
    /// no flag.
    pub fn from_spans(spans: &[AnnotationSpan]) -> Self {
        let mut flags = PhenomenonFlags::default();
        for span in spans {
            match span.kind {
                SpanKind::Incomprehension => flags.incomprehension = true,
                SpanKind::Hypothesis => flags.hypothesis = true,
                SpanKind::Overlap => flags.overlap = true,
                SpanKind::Comment | SpanKind::Lengthening | SpanKind::Pause => {}
            }
        }
        flags
    }
}

/// One reference segment: a prosodic utterance unit as transcribed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtteranceUnit {
    /// Ordinal within the inquiry, 0-based.
    pub index: usize,
    /// Speaker label from the `SPEAKER:<TAB>` prefix; empty when absent.
    pub speaker: String,
    /// Annotated text as written, byte-for-byte, prefix excluded.
    pub raw: String,
    /// Annotation marks, sorted by start offset (enclosing spans first).
    pub spans: Vec<AnnotationSpan>,
    pub flags: PhenomenonFlags,
}

impl UtteranceUnit {
    /// Reconstructs the transcript line this unit was parsed from.
    pub fn source_line(&self) -> String {
        if self.speaker.is_empty() {
            self.raw.clone()
        } else {
            format!("{}:\t{}", self.speaker, self.raw)
        }
    }
}

/// One recording's transcript plus its manifest metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inquiry {
    pub id: String,
    pub genre: Genre,
    pub quality: Quality,
    pub duration_secs: u64,
    pub units: Vec<UtteranceUnit>,
}

/// Manifest metadata needed to build an [`Inquiry`] from transcript text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InquiryMeta {
    pub genre: Genre,
    pub quality: Quality,
    pub duration_secs: u64,
}

/// A parse diagnostic attached to one unit. Diagnostics never fail a parse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitDiagnostic {
    /// An opening mark with no closer (treated as extending to end of unit)
    /// or a closer with no opener.
    UnbalancedDelimiter { mark: String, offset: usize },
    /// A character outside the convention's mark inventory, kept as plain
    /// text (e.g. truncation `/`).
    UnknownMark { ch: char, count: usize },
}

/// Diagnostic bound to the unit it was observed in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub unit_index: usize,
    #[serde(flatten)]
    pub detail: UnitDiagnostic,
}

/// Result of scanning one unit's text for annotation marks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpanScan {
    pub spans: Vec<AnnotationSpan>,
    pub warnings: Vec<UnitDiagnostic>,
}

/// A parsed inquiry together with the diagnostics gathered along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInquiry {
    pub inquiry: Inquiry,
    pub diagnostics: Vec<Diagnostic>,
}

/// Marks the scanner recognizes but that carry no span of their own.
/// Anything else that is neither alphanumeric nor whitespace is reported as
/// an unknown mark.
const PLAIN_MARKS: &[char] = &[
    '(', ')', '[', ']', ':', '.', '?', '!', ',', ';', '-', '\'', '"', '`', '«', '»', '“', '”',
    '‘', '’', '…', 'º', 'ª', '°',
];

/// Scans one unit's text for annotation spans.
///
/// Deterministic, longest-match: `((` opens a comment before `(` is tried as
/// a hypothesis/incomprehension mark. Unbalanced delimiters are reported as
/// warnings and the unmatched opener extends to the end of the unit. An
/// overlap opened by `[` closes at `]`, at the next `[`, or at end of unit;
/// the unclosed form is the convention's normal case and draws no warning.
pub fn detect_spans(raw: &str) -> SpanScan {
    let chars: Vec<(usize, char)> = raw.char_indices().collect();
    let total = raw.len();
    let at = |i: usize| chars.get(i).map(|&(_, c)| c);
    let byte = |i: usize| chars.get(i).map_or(total, |&(b, _)| b);

    let mut spans = Vec::new();
    let mut warnings = Vec::new();
    let mut overlap_open: Option<usize> = None;

    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            '(' if at(i + 1) == Some('(') => {
                // Comment: nested (( )) pairs are consumed by depth tracking;
                // single parentheses inside are plain content.
                let mut depth = 1;
                let mut j = i + 2;
                let mut close = None;
                while j < chars.len() {
                    if at(j) == Some('(') && at(j + 1) == Some('(') {
                        depth += 1;
                        j += 2;
                    } else if at(j) == Some(')') && at(j + 1) == Some(')') {
                        depth -= 1;
                        j += 2;
                        if depth == 0 {
                            close = Some(j);
                            break;
                        }
                    } else {
                        j += 1;
                    }
                }
                let end = match close {
                    Some(j) => byte(j),
                    None => {
                        warnings.push(UnitDiagnostic::UnbalancedDelimiter {
                            mark: "((".to_string(),
                            offset: pos,
                        });
                        total
                    }
                };
                spans.push(AnnotationSpan::new(SpanKind::Comment, pos, end));
                i = close.unwrap_or(chars.len());
            }
            '(' => {
                let mut j = i + 1;
                while j < chars.len() && at(j) != Some(')') {
                    j += 1;
                }
                let (content_end, end, next) = if j < chars.len() {
                    (byte(j), byte(j + 1), j + 1)
                } else {
                    warnings.push(UnitDiagnostic::UnbalancedDelimiter {
                        mark: "(".to_string(),
                        offset: pos,
                    });
                    (total, total, chars.len())
                };
                let content = &raw[byte(i + 1)..content_end];
                let kind = if content.trim().is_empty() {
                    SpanKind::Incomprehension
                } else {
                    SpanKind::Hypothesis
                };
                spans.push(AnnotationSpan::new(kind, pos, end));
                i = next;
            }
            ')' => {
                warnings.push(UnitDiagnostic::UnbalancedDelimiter {
                    mark: ")".to_string(),
                    offset: pos,
                });
                i += 1;
            }
            '[' => {
                if let Some(start) = overlap_open.take() {
                    // A new onset closes the previous unclosed overlap.
                    spans.push(AnnotationSpan::new(SpanKind::Overlap, start, pos));
                }
                overlap_open = Some(pos);
                i += 1;
            }
            ']' => {
                match overlap_open.take() {
                    Some(start) => {
                        spans.push(AnnotationSpan::new(SpanKind::Overlap, start, byte(i + 1)));
                    }
                    None => warnings.push(UnitDiagnostic::UnbalancedDelimiter {
                        mark: "]".to_string(),
                        offset: pos,
                    }),
                }
                i += 1;
            }
            ':' if at(i + 1) == Some(':') => {
                let mut j = i;
                while at(j) == Some(':') {
                    j += 1;
                }
                spans.push(AnnotationSpan::new(SpanKind::Lengthening, pos, byte(j)));
                i = j;
            }
            '.' if at(i + 1) == Some('.') && at(i + 2) == Some('.') => {
                let mut j = i;
                while at(j) == Some('.') {
                    j += 1;
                }
                spans.push(AnnotationSpan::new(SpanKind::Pause, pos, byte(j)));
                i = j;
            }
            _ => i += 1,
        }
    }
    if let Some(start) = overlap_open {
        if start < total {
            spans.push(AnnotationSpan::new(SpanKind::Overlap, start, total));
        }
    }
    spans.sort_by(|a, b| a.start.cmp(&b.start).then(b.end.cmp(&a.end)));
    SpanScan { spans, warnings }
}

/// Splits an optional `SPEAKER:<TAB>` prefix off a transcript line.
///
/// The label must be non-empty and free of whitespace and mark characters;
/// anything else leaves the whole line as unit text with an empty speaker.
fn split_speaker(line: &str) -> (&str, &str) {
    if let Some(pos) = line.find(":\t") {
        let candidate = &line[..pos];
        if !candidate.is_empty()
            && candidate
                .chars()
                .all(|c| !c.is_whitespace() && !"()[]:".contains(c))
        {
            return (candidate, &line[pos + 2..]);
        }
    }
    ("", line)
}

/// Parses one transcript into an [`Inquiry`].
///
/// One utterance unit per non-blank line; file order is preserved and raw
/// text is kept byte-for-byte so the source can be reconstructed.
pub fn parse_inquiry(text: &str, id: &str, meta: InquiryMeta) -> Result<ParsedInquiry, ParseError> {
    let mut units = Vec::new();
    let mut diagnostics = Vec::new();

    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let index = units.len();
        let (speaker, raw) = split_speaker(line);
        let scan = detect_spans(raw);
        for detail in scan.warnings {
            diagnostics.push(Diagnostic {
                unit_index: index,
                detail,
            });
        }
        for (ch, count) in unknown_marks(raw) {
            diagnostics.push(Diagnostic {
                unit_index: index,
                detail: UnitDiagnostic::UnknownMark { ch, count },
            });
        }
        let flags = PhenomenonFlags::from_spans(&scan.spans);
        units.push(UtteranceUnit {
            index,
            speaker: speaker.to_string(),
            raw: raw.to_string(),
            spans: scan.spans,
            flags,
        });
    }

    if units.is_empty() {
        return Err(ParseError::EmptyFile { id: id.to_string() });
    }

    Ok(ParsedInquiry {
        inquiry: Inquiry {
            id: id.to_string(),
            genre: meta.genre,
            quality: meta.quality,
            duration_secs: meta.duration_secs,
            units,
        },
        diagnostics,
    })
}

/// Census of characters outside the convention's mark inventory, in first-seen
/// order.
fn unknown_marks(raw: &str) -> Vec<(char, usize)> {
    let mut seen: Vec<(char, usize)> = Vec::new();
    for c in raw.chars() {
        if c.is_alphanumeric() || c.is_whitespace() || PLAIN_MARKS.contains(&c) {
            continue;
        }
        match seen.iter_mut().find(|(ch, _)| *ch == c) {
            Some((_, n)) => *n += 1,
            None => seen.push((c, 1)),
        }
    }
    seen
}

/// Span totals of the three phenomena across all units of an inquiry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhenomenonCounts {
    pub overlap: usize,
    pub incomprehension: usize,
    pub hypothesis: usize,
}

impl PhenomenonCounts {
    pub fn merge(&mut self, other: &PhenomenonCounts) {
        self.overlap += other.overlap;
        self.incomprehension += other.incomprehension;
        self.hypothesis += other.hypothesis;
    }

    /// Counts spans (not units) in a single unit.
    pub fn of_unit(unit: &UtteranceUnit) -> Self {
        let mut counts = PhenomenonCounts::default();
        for span in &unit.spans {
            match span.kind {
                SpanKind::Overlap => counts.overlap += 1,
                SpanKind::Incomprehension => counts.incomprehension += 1,
                SpanKind::Hypothesis => counts.hypothesis += 1,
                _ => {}
            }
        }
        counts
    }
}

/// Counts total spans of each phenomenon kind across all units.
pub fn count_phenomena(inquiry: &Inquiry) -> PhenomenonCounts {
    let mut counts = PhenomenonCounts::default();
    for unit in &inquiry.units {
        counts.merge(&PhenomenonCounts::of_unit(unit));
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> InquiryMeta {
        InquiryMeta {
            genre: Genre::D2,
            quality: Quality::Bad,
            duration_secs: 3812,
        }
    }

    fn kinds(raw: &str) -> Vec<SpanKind> {
        detect_spans(raw).spans.iter().map(|s| s.kind).collect()
    }

    #[test]
    fn incomprehension_is_whitespace_only_parens() {
        let scan = detect_spans("( )");
        assert_eq!(
            scan.spans,
            vec![AnnotationSpan::new(SpanKind::Incomprehension, 0, 3)]
        );
        assert!(scan.warnings.is_empty());
    }

    #[test]
    fn hypothesis_has_content() {
        let scan = detect_spans("(não) soube");
        assert_eq!(scan.spans.len(), 1);
        let span = scan.spans[0];
        assert_eq!(span.kind, SpanKind::Hypothesis);
        assert_eq!(&"(não) soube"[span.start..span.end], "(não)");
    }

    #[test]
    fn lengthening_run() {
        let scan = detect_spans("ter:: éh");
        assert_eq!(scan.spans.len(), 1);
        let span = scan.spans[0];
        assert_eq!(span.kind, SpanKind::Lengthening);
        assert_eq!(&"ter:: éh"[span.start..span.end], "::");
    }

    #[test]
    fn pause_needs_three_dots() {
        assert_eq!(kinds("eu VI... lá"), vec![SpanKind::Pause]);
        assert_eq!(kinds("a.. b"), vec![]);
        assert_eq!(kinds("a. b"), vec![]);
    }

    #[test]
    fn comment_consumes_nested_parens() {
        let raw = "((a (b) c))";
        let scan = detect_spans(raw);
        assert_eq!(scan.spans.len(), 1);
        let span = scan.spans[0];
        assert_eq!(span.kind, SpanKind::Comment);
        assert_eq!(&raw[span.start..span.end], raw);
    }

    #[test]
    fn two_comments_stay_separate() {
        let raw = "a ((x)) b ((y)) c";
        let scan = detect_spans(raw);
        assert_eq!(
            scan.spans.iter().map(|s| s.kind).collect::<Vec<_>>(),
            vec![SpanKind::Comment, SpanKind::Comment]
        );
        assert_eq!(&raw[scan.spans[0].start..scan.spans[0].end], "((x))");
        assert_eq!(&raw[scan.spans[1].start..scan.spans[1].end], "((y))");
    }

    #[test]
    fn unmatched_overlap_extends_to_end() {
        let raw = "é eu [soube que";
        let scan = detect_spans(raw);
        assert_eq!(scan.spans.len(), 1);
        let span = scan.spans[0];
        assert_eq!(span.kind, SpanKind::Overlap);
        assert_eq!(&raw[span.start..span.end], "[soube que");
        assert!(scan.warnings.is_empty(), "unclosed [ is not a warning");
    }

    #[test]
    fn matched_overlap_closes_at_bracket() {
        let raw = "a [b c] d";
        let scan = detect_spans(raw);
        assert_eq!(scan.spans.len(), 1);
        assert_eq!(&raw[scan.spans[0].start..scan.spans[0].end], "[b c]");
    }

    #[test]
    fn second_onset_splits_overlaps() {
        let raw = "a [b [c";
        let scan = detect_spans(raw);
        assert_eq!(scan.spans.len(), 2);
        assert_eq!(&raw[scan.spans[0].start..scan.spans[0].end], "[b ");
        assert_eq!(&raw[scan.spans[1].start..scan.spans[1].end], "[c");
    }

    #[test]
    fn unbalanced_marks_warn_but_do_not_fail() {
        let scan = detect_spans("(aberto sem fim");
        assert_eq!(scan.spans.len(), 1);
        assert_eq!(scan.spans[0].kind, SpanKind::Hypothesis);
        assert_eq!(scan.warnings.len(), 1);

        let scan = detect_spans("fecho ) solto ]");
        assert_eq!(scan.spans.len(), 0);
        assert_eq!(scan.warnings.len(), 2);
    }

    #[test]
    fn table_row_flags_all_three_phenomena() {
        let raw = "e dão muito trabalho ... [( ) (não está muito na idade né?";
        let parsed = parse_inquiry(raw, "SP_D2_360", meta()).unwrap();
        let unit = &parsed.inquiry.units[0];
        assert!(unit.flags.overlap);
        assert!(unit.flags.incomprehension);
        assert!(unit.flags.hypothesis);
    }

    #[test]
    fn plain_line_has_no_spans() {
        let parsed = parse_inquiry("hoje fui ao mercado", "x", meta()).unwrap();
        let unit = &parsed.inquiry.units[0];
        assert!(unit.spans.is_empty());
        assert_eq!(unit.flags, PhenomenonFlags::default());
    }

    #[test]
    fn comment_sets_no_flag() {
        let parsed = parse_inquiry("disse ((risos)) que sim", "x", meta()).unwrap();
        let unit = &parsed.inquiry.units[0];
        assert_eq!(
            unit.spans.iter().map(|s| s.kind).collect::<Vec<_>>(),
            vec![SpanKind::Comment]
        );
        assert_eq!(unit.flags, PhenomenonFlags::default());
    }

    #[test]
    fn speaker_prefix_is_split_off() {
        let parsed = parse_inquiry("L1:\tbom dia\nsem prefixo", "x", meta()).unwrap();
        let units = &parsed.inquiry.units;
        assert_eq!(units[0].speaker, "L1");
        assert_eq!(units[0].raw, "bom dia");
        assert_eq!(units[0].source_line(), "L1:\tbom dia");
        assert_eq!(units[1].speaker, "");
        assert_eq!(units[1].raw, "sem prefixo");
    }

    #[test]
    fn colon_without_tab_is_not_a_prefix() {
        let parsed = parse_inquiry("ter:: éh", "x", meta()).unwrap();
        assert_eq!(parsed.inquiry.units[0].speaker, "");
        assert_eq!(parsed.inquiry.units[0].raw, "ter:: éh");
    }

    #[test]
    fn blank_lines_are_skipped_and_order_kept() {
        let parsed = parse_inquiry("um\n\n  \ndois\ntrês\n", "x", meta()).unwrap();
        let raws: Vec<&str> = parsed.inquiry.units.iter().map(|u| u.raw.as_str()).collect();
        assert_eq!(raws, vec!["um", "dois", "três"]);
        assert_eq!(parsed.inquiry.units[2].index, 2);
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(
            parse_inquiry("\n  \n", "x", meta()),
            Err(ParseError::EmptyFile { .. })
        ));
    }

    #[test]
    fn unknown_marks_are_reported() {
        let parsed = parse_inquiry("vo/ você & eu /", "x", meta()).unwrap();
        let unknown: Vec<_> = parsed
            .diagnostics
            .iter()
            .filter_map(|d| match d.detail {
                UnitDiagnostic::UnknownMark { ch, count } => Some((ch, count)),
                _ => None,
            })
            .collect();
        assert_eq!(unknown, vec![('/', 2), ('&', 1)]);
    }

    #[test]
    fn count_phenomena_totals_spans_not_units() {
        let text = "a [b ( ) c\nd (e) f (g)\nh (i) [j";
        let parsed = parse_inquiry(text, "x", meta()).unwrap();
        let counts = count_phenomena(&parsed.inquiry);
        assert_eq!(
            counts,
            PhenomenonCounts {
                overlap: 2,
                incomprehension: 1,
                hypothesis: 3,
            }
        );
    }

    #[test]
    fn count_phenomena_empty_inquiry_is_zero() {
        let parsed = parse_inquiry("sem marcas", "x", meta()).unwrap();
        assert_eq!(count_phenomena(&parsed.inquiry), PhenomenonCounts::default());
    }

    #[test]
    fn flags_match_span_fold() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pieces = [
            "palavra", "éh", "( )", "(sei lá)", "((riso))", "[", "]", "::", "...", "né?",
        ];
        for _ in 0..500 {
            let n = rng.gen_range(1..8);
            let raw: Vec<&str> = (0..n)
                .map(|_| pieces[rng.gen_range(0..pieces.len())])
                .collect();
            let raw = raw.join(" ");
            let scan = detect_spans(&raw);
            assert_eq!(
                PhenomenonFlags::from_spans(&scan.spans),
                parse_inquiry(&raw, "f", meta()).unwrap().inquiry.units[0].flags,
                "raw: {raw}"
            );
        }
    }

    #[test]
    fn spans_lie_within_raw_and_match_patterns() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let pieces = [
            "fala", "a", "( )", "()", "(hipótese boa)", "((tosse))", "((a (b) c))", "[", "]",
            "::", ":::", "...", "....", "?", "não", "ção",
        ];
        for _ in 0..800 {
            let n = rng.gen_range(1..10);
            let raw: Vec<&str> = (0..n)
                .map(|_| pieces[rng.gen_range(0..pieces.len())])
                .collect();
            let raw = raw.join(" ");
            for span in detect_spans(&raw).spans {
                assert!(span.start < span.end && span.end <= raw.len());
                assert!(raw.is_char_boundary(span.start) && raw.is_char_boundary(span.end));
                let text = &raw[span.start..span.end];
                match span.kind {
                    SpanKind::Comment => assert!(text.starts_with("((")),
                    SpanKind::Incomprehension => {
                        assert!(text.starts_with('('));
                        assert!(text.trim_matches(|c| c == '(' || c == ')').trim().is_empty());
                    }
                    SpanKind::Hypothesis => assert!(text.starts_with('(')),
                    SpanKind::Overlap => assert!(text.starts_with('[')),
                    SpanKind::Lengthening => {
                        assert!(text.len() >= 2 && text.chars().all(|c| c == ':'))
                    }
                    SpanKind::Pause => {
                        assert!(text.len() >= 3 && text.chars().all(|c| c == '.'))
                    }
                }
            }
        }
    }

    #[test]
    fn round_trip_reconstructs_non_blank_lines() {
        let text = "L1:\te aí ((riso)) tudo bem?\n\nDoc:\tsim [tudo\nsolto ( ) aqui\n";
        let parsed = parse_inquiry(text, "x", meta()).unwrap();
        let rebuilt: Vec<String> = parsed.inquiry.units.iter().map(|u| u.source_line()).collect();
        let expected: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        assert_eq!(rebuilt, expected);
    }
}
