//! The five-step normalization pipeline that turns an annotated utterance
//! unit into a clean token sequence, or signals that the unit must be
//! ignored:
//!
//! 1. remove `((comment))` snippets, content included;
//! 2. remove annotation marks and extra punctuation — incomprehension
//!    `( )` disappears whole, hypothesis parentheses keep their content;
//! 3. collapse whitespace runs;
//! 4. lowercase, canonicalize filled pauses, split hyphens, spell out
//!    acronyms, expand cardinals and ordinals, drop leftover non-alphabet
//!    characters;
//! 5. ignore units whose result is empty (they leave the test set).
//!
//! Steps must run in this order: running step 2 before step 1 would leak
//! comment words into the reference.
//!
//! Everything here is pure and stateless given an immutable config, so units
//! can be normalized in parallel.

mod config;
pub mod numwords;

pub use config::{is_token_char, is_valid_token, NormalizerConfig};
pub use numwords::Gender;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::NormalizeError;
use crate::parser::{detect_spans, SpanKind, UtteranceUnit};

/// Pipeline steps, identified 1–5 in traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Step {
    RemoveComments,
    RemoveMarks,
    CollapseSpaces,
    NormalizeTokens,
    IgnoreEmpty,
}

impl From<Step> for u8 {
    fn from(step: Step) -> u8 {
        match step {
            Step::RemoveComments => 1,
            Step::RemoveMarks => 2,
            Step::CollapseSpaces => 3,
            Step::NormalizeTokens => 4,
            Step::IgnoreEmpty => 5,
        }
    }
}

impl TryFrom<u8> for Step {
    type Error = String;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        match id {
            1 => Ok(Step::RemoveComments),
            2 => Ok(Step::RemoveMarks),
            3 => Ok(Step::CollapseSpaces),
            4 => Ok(Step::NormalizeTokens),
            5 => Ok(Step::IgnoreEmpty),
            other => Err(format!("no pipeline step {other}")),
        }
    }
}

/// A normalized reference: lowercase tokens plus the steps that changed it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedText {
    pub tokens: Vec<String>,
    pub trace: Vec<Step>,
}

impl NormalizedText {
    /// Single-space-joined token string, the surface CER operates on.
    pub fn rendered(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Why a unit was dropped from the test set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum IgnoreReason {
    /// Nothing left after normalization (e.g. a comment-only unit).
    Empty,
    /// A number too large to expand; the digits are kept for manual review.
    NumberOutOfRange { literal: String },
}

/// Outcome of normalizing one unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Normalized {
    Text(NormalizedText),
    Ignored {
        #[serde(flatten)]
        reason: IgnoreReason,
        trace: Vec<Step>,
    },
}

impl Normalized {
    pub fn tokens(&self) -> Option<&[String]> {
        match self {
            Normalized::Text(text) => Some(&text.tokens),
            Normalized::Ignored { .. } => None,
        }
    }
}

/// Step 1: removes every `((comment))` span, content included. All other
/// text is preserved byte-for-byte.
pub fn strip_comments(raw: &str) -> String {
    let scan = detect_spans(raw);
    let mut out = String::with_capacity(raw.len());
    let mut pos = 0;
    for span in scan.spans.iter().filter(|s| s.kind == SpanKind::Comment) {
        if span.start >= pos {
            out.push_str(&raw[pos..span.start]);
            pos = span.end;
        }
    }
    out.push_str(&raw[pos..]);
    out
}

/// Punctuation dropped by step 2 wherever it appears.
fn is_strip_mark(c: char) -> bool {
    matches!(
        c,
        '(' | ')' | '[' | ']' | ':' | ';' | ',' | '?' | '!' | '"' | '\'' | '`' | '«' | '»'
            | '“' | '”' | '‘' | '’' | '…'
    )
}

/// Step 2: removes annotation marks and extra punctuation.
///
/// Incomprehension marks `( )` are removed whole (they contribute no words);
/// hypothesis parentheses are removed but their content is kept. Runs of two
/// or more dots (pauses) disappear; single dots survive until step 4 so
/// dotted acronyms like `U.N.` stay recognizable.
pub fn strip_marks(text: &str) -> String {
    let scan = detect_spans(text);
    let mut cut = vec![false; text.len()];
    for span in scan
        .spans
        .iter()
        .filter(|s| s.kind == SpanKind::Incomprehension)
    {
        for flag in &mut cut[span.start..span.end] {
            *flag = true;
        }
    }

    let mut out = String::with_capacity(text.len());
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if cut[i] {
            continue;
        }
        if c == '.' {
            let mut run = 1;
            while chars.peek().is_some_and(|&(_, next)| next == '.') {
                chars.next();
                run += 1;
            }
            if run == 1 {
                out.push('.');
            }
            continue;
        }
        if !is_strip_mark(c) {
            out.push(c);
        }
    }
    out
}

/// Step 3: whitespace runs become a single space; ends are trimmed.
pub fn collapse_spaces(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Uppercase A–Z letters of `word` if it is an acronym: letters plus
/// optional dots, at least two letters when dotted (`U.N.`), three when bare
/// (`USP`). Bare two-letter words are treated as CAPS emphasis, not
/// acronyms, and accented words never qualify.
fn acronym_letters(word: &str) -> Option<Vec<char>> {
    let mut letters = Vec::new();
    let mut dotted = false;
    for c in word.chars() {
        if c.is_ascii_uppercase() {
            letters.push(c.to_ascii_lowercase());
        } else if c == '.' {
            dotted = true;
        } else {
            return None;
        }
    }
    let min = if dotted { 2 } else { 3 };
    (letters.len() >= min).then_some(letters)
}

/// Expands a word containing digits. Whole numbers become cardinals, a
/// digits-plus-`º`/`ª`/`o`/`a` word becomes an ordinal with the gender the
/// mark dictates, and glued forms like `25kg` are split first.
fn expand_numeric(
    word: &str,
    cfg: &NormalizerConfig,
    out: &mut Vec<String>,
) -> Result<(), NormalizeError> {
    let parse = |digits: &str| -> Result<u64, NormalizeError> {
        digits
            .parse::<u64>()
            .map_err(|_| NormalizeError::NumberOutOfRange {
                literal: digits.to_string(),
            })
    };
    let push_words = |phrase: String, out: &mut Vec<String>| {
        out.extend(phrase.split_whitespace().map(str::to_string));
    };

    let chars: Vec<char> = word.chars().collect();
    if chars.len() >= 2 {
        let (digits, suffix) = chars.split_at(chars.len() - 1);
        let gender = match suffix[0] {
            'º' | '°' | 'o' | 'O' => Some(Gender::Masculine),
            'ª' | 'a' | 'A' => Some(Gender::Feminine),
            _ => None,
        };
        if let Some(gender) = gender {
            if digits.iter().all(char::is_ascii_digit) {
                let digits: String = digits.iter().collect();
                push_words(numwords::ordinal(parse(&digits)?, gender)?, out);
                return Ok(());
            }
        }
    }

    if chars.iter().all(char::is_ascii_digit) {
        push_words(numwords::cardinal(parse(word)?, cfg.number_gender)?, out);
        return Ok(());
    }

    // Mixed word: expand each digit run, keep the letter runs.
    let mut rest = word;
    while !rest.is_empty() {
        let digit_len = rest.chars().take_while(char::is_ascii_digit).count();
        if digit_len > 0 {
            let (digits, tail) = rest.split_at(digit_len);
            push_words(numwords::cardinal(parse(digits)?, cfg.number_gender)?, out);
            rest = tail;
        } else {
            let text_len: usize = rest
                .chars()
                .take_while(|c| !c.is_ascii_digit())
                .map(char::len_utf8)
                .sum();
            let (text, tail) = rest.split_at(text_len);
            out.push(text.to_lowercase());
            rest = tail;
        }
    }
    Ok(())
}

/// Step 4: token-level normalization. Expects marks stripped and spaces
/// collapsed.
pub fn normalize_tokens(
    text: &str,
    cfg: &NormalizerConfig,
) -> Result<NormalizedText, NormalizeError> {
    let composed: String = text.nfc().collect();
    let dehyphened: String = composed
        .chars()
        .map(|c| if matches!(c, '-' | '–' | '—') { ' ' } else { c })
        .collect();

    let mut words = Vec::new();
    for word in dehyphened.split_whitespace() {
        if let Some(letters) = acronym_letters(word) {
            words.extend(letters.into_iter().map(|c| cfg.letter_name(c)));
        } else if word.chars().any(|c| c.is_ascii_digit()) {
            expand_numeric(word, cfg, &mut words)?;
        } else {
            words.push(word.to_lowercase());
        }
    }

    let mut tokens = Vec::new();
    for word in words {
        let cleaned: String = word.chars().filter(|&c| is_token_char(c)).collect();
        if cleaned.is_empty() {
            continue;
        }
        match cfg.filled_pauses.get(&cleaned) {
            Some(canonical) => tokens.push(canonical.clone()),
            None => tokens.push(cleaned),
        }
    }

    let trace = if tokens.join(" ") == text {
        Vec::new()
    } else {
        vec![Step::NormalizeTokens]
    };
    Ok(NormalizedText { tokens, trace })
}

/// Runs steps 1–5 on one unit's raw text.
pub fn normalize_raw(raw: &str, cfg: &NormalizerConfig) -> Normalized {
    let mut trace = Vec::new();
    let uncommented = strip_comments(raw);
    if uncommented != raw {
        trace.push(Step::RemoveComments);
    }
    let unmarked = strip_marks(&uncommented);
    if unmarked != uncommented {
        trace.push(Step::RemoveMarks);
    }
    let collapsed = collapse_spaces(&unmarked);
    if collapsed != unmarked {
        trace.push(Step::CollapseSpaces);
    }
    match normalize_tokens(&collapsed, cfg) {
        Err(NormalizeError::NumberOutOfRange { literal }) => {
            trace.push(Step::NormalizeTokens);
            trace.push(Step::IgnoreEmpty);
            Normalized::Ignored {
                reason: IgnoreReason::NumberOutOfRange { literal },
                trace,
            }
        }
        Ok(normalized) => {
            trace.extend(normalized.trace);
            if normalized.tokens.is_empty() {
                trace.push(Step::IgnoreEmpty);
                Normalized::Ignored {
                    reason: IgnoreReason::Empty,
                    trace,
                }
            } else {
                Normalized::Text(NormalizedText {
                    tokens: normalized.tokens,
                    trace,
                })
            }
        }
    }
}

/// Normalizes a parsed unit (steps 1–5).
pub fn normalize_unit(unit: &UtteranceUnit, cfg: &NormalizerConfig) -> Normalized {
    normalize_raw(&unit.raw, cfg)
}

/// Normalizes an ASR hypothesis line: steps 3–4 only, since model output
/// carries no annotation marks.
pub fn normalize_hypothesis(
    text: &str,
    cfg: &NormalizerConfig,
) -> Result<NormalizedText, NormalizeError> {
    let collapsed = collapse_spaces(text);
    let mut trace = if collapsed != text {
        vec![Step::CollapseSpaces]
    } else {
        Vec::new()
    };
    let normalized = normalize_tokens(&collapsed, cfg)?;
    trace.extend(normalized.trace);
    Ok(NormalizedText {
        tokens: normalized.tokens,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NormalizerConfig {
        NormalizerConfig::default()
    }

    fn tokens(raw: &str) -> Vec<String> {
        match normalize_raw(raw, &cfg()) {
            Normalized::Text(t) => t.tokens,
            Normalized::Ignored { .. } => Vec::new(),
        }
    }

    #[test]
    fn strip_comments_keeps_other_text() {
        assert_eq!(
            strip_comments("hoje fui ((risos)) ao mercado"),
            "hoje fui  ao mercado"
        );
        assert_eq!(strip_comments("((tosse))"), "");
        assert_eq!(strip_comments("a ((x)) b ((y)) c"), "a  b  c");
    }

    #[test]
    fn strip_marks_keeps_hypothesis_content() {
        assert_eq!(
            strip_marks("isso eu (não) soube né eu VI..."),
            "isso eu não soube né eu VI"
        );
        assert_eq!(
            strip_marks("[( ) (não está muito na idade né?"),
            " não está muito na idade né"
        );
        assert_eq!(strip_marks("ter:: éh"), "ter éh");
    }

    #[test]
    fn incomprehension_leaves_nothing() {
        assert_eq!(strip_marks("( )"), "");
        assert_eq!(strip_marks("a ( ) b"), "a  b");
    }

    #[test]
    fn collapse_spaces_examples() {
        assert_eq!(collapse_spaces("hoje     fui ao mercado"), "hoje fui ao mercado");
        assert_eq!(collapse_spaces("  a  "), "a");
        assert_eq!(collapse_spaces(""), "");
    }

    #[test]
    fn caps_emphasis_folds_to_lowercase() {
        assert_eq!(tokens("juvenTUde"), vec!["juventude"]);
        assert_eq!(tokens("eu VI lá"), vec!["eu", "vi", "lá"]);
        assert_eq!(tokens("NÃO sei"), vec!["não", "sei"]);
    }

    #[test]
    fn bare_acronyms_need_three_letters() {
        assert_eq!(tokens("USP"), vec!["u", "esse", "pê"]);
        assert_eq!(tokens("U.N."), vec!["u", "ene"]);
        assert_eq!(tokens("VI"), vec!["vi"]);
    }

    #[test]
    fn cardinal_expansion() {
        assert_eq!(tokens("25"), vec!["vinte", "e", "cinco"]);
        assert_eq!(tokens("0"), vec!["zero"]);
        assert_eq!(
            tokens("101 vezes"),
            vec!["cento", "e", "um", "vezes"]
        );
    }

    #[test]
    fn ordinal_marks_carry_gender() {
        assert_eq!(tokens("2a"), vec!["segunda"]);
        assert_eq!(tokens("2º"), vec!["segundo"]);
        assert_eq!(tokens("21ª"), vec!["vigésima", "primeira"]);
    }

    #[test]
    fn glued_digits_split() {
        assert_eq!(tokens("25kg"), vec!["vinte", "e", "cinco", "kg"]);
        assert_eq!(tokens("R2D2"), vec!["r", "dois", "d", "dois"]);
    }

    #[test]
    fn hyphens_split_words() {
        assert_eq!(tokens("guarda-chuva"), vec!["guarda", "chuva"]);
    }

    #[test]
    fn filled_pauses_are_canonicalized_not_deleted() {
        assert_eq!(tokens("éh ahn ahn"), vec!["eh", "ahn", "ahn"]);
    }

    #[test]
    fn leftover_symbols_are_dropped() {
        assert_eq!(tokens("vo/ você & eu"), vec!["vo", "você", "eu"]);
    }

    #[test]
    fn comment_only_unit_is_ignored() {
        match normalize_raw("((risos))", &cfg()) {
            Normalized::Ignored { reason, trace } => {
                assert_eq!(reason, IgnoreReason::Empty);
                assert_eq!(trace, vec![Step::RemoveComments, Step::IgnoreEmpty]);
            }
            other => panic!("expected ignored, got {other:?}"),
        }
    }

    #[test]
    fn huge_number_flags_unit_for_review() {
        match normalize_raw("custa 1234567890 reais", &cfg()) {
            Normalized::Ignored { reason, .. } => {
                assert_eq!(
                    reason,
                    IgnoreReason::NumberOutOfRange {
                        literal: "1234567890".to_string()
                    }
                );
            }
            other => panic!("expected ignored, got {other:?}"),
        }
    }

    #[test]
    fn pipeline_order_is_comments_before_marks() {
        // Stripping marks first would leak "a b c" into the reference.
        assert!(matches!(
            normalize_raw("((a (b) c))", &cfg()),
            Normalized::Ignored {
                reason: IgnoreReason::Empty,
                ..
            }
        ));
    }

    #[test]
    fn hypothesis_normalization_skips_mark_handling() {
        let text = normalize_hypothesis("  que dá  muito trabalho ", &cfg()).unwrap();
        assert_eq!(text.tokens, vec!["que", "dá", "muito", "trabalho"]);
        // Steps 1–2 never run for hypotheses, so bracket-like characters
        // would only disappear via the alphabet filter.
        let odd = normalize_hypothesis("a(b", &cfg()).unwrap();
        assert_eq!(odd.tokens, vec!["ab"]);
    }

    #[test]
    fn decomposed_accents_are_composed() {
        // "não" with a combining tilde normalizes to the composed form.
        let decomposed = "na\u{0303}o";
        assert_eq!(tokens(decomposed), vec!["não"]);
    }

    #[test]
    fn table_row_references_normalize_to_expected_counts() {
        let row1 = "e dão muito trabalho tem esses esses problemas de juvenTUde esses negócios [( ) (não está muito na idade né?)";
        let row2 = "é eu [soube que também provocou um certo ciúmes ahn ahn isso eu (não) soube né eu VI... lá eu senti... um certo ciúmes ter:: éh ter sido escolhido uma mulher";
        assert_eq!(tokens(row1).len(), 18);
        assert_eq!(tokens(row2).len(), 31);
    }

    #[test]
    fn idempotence_on_rendered_output() {
        for raw in [
            "e dão muito trabalho ((riso)) [( ) (não está na idade né?",
            "ter:: éh 25kg U.S.P. guarda-chuva 3º",
            "éh AHN",
        ] {
            let first = normalize_raw(raw, &cfg());
            let Normalized::Text(text) = first else {
                panic!("expected text for {raw:?}");
            };
            let again = normalize_raw(&text.rendered(), &cfg());
            assert_eq!(again.tokens(), Some(text.tokens.as_slice()), "raw: {raw}");
        }
    }
}
