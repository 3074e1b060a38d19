//! Native expansion of cardinal and ordinal numbers into Portuguese words.
//!
//! Cardinals cover 0..=999_999_999 and ordinals 1..=1000; anything beyond is
//! a [`NormalizeError::NumberOutOfRange`] so the caller can route the unit to
//! manual review.

use serde::{Deserialize, Serialize};

use crate::error::NormalizeError;

/// Grammatical gender applied when a numeral inflects (um/uma, dois/duas,
/// duzentos/duzentas, primeiro/primeira).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    #[default]
    Masculine,
    Feminine,
}

pub const CARDINAL_MAX: u64 = 999_999_999;
pub const ORDINAL_MAX: u64 = 1000;

const UNITS: [&str; 20] = [
    "zero",
    "um",
    "dois",
    "três",
    "quatro",
    "cinco",
    "seis",
    "sete",
    "oito",
    "nove",
    "dez",
    "onze",
    "doze",
    "treze",
    "catorze",
    "quinze",
    "dezesseis",
    "dezessete",
    "dezoito",
    "dezenove",
];

const TENS: [&str; 10] = [
    "", "", "vinte", "trinta", "quarenta", "cinquenta", "sessenta", "setenta", "oitenta",
    "noventa",
];

const HUNDREDS: [&str; 10] = [
    "",
    "cento",
    "duzentos",
    "trezentos",
    "quatrocentos",
    "quinhentos",
    "seiscentos",
    "setecentos",
    "oitocentos",
    "novecentos",
];

const ORD_UNITS: [&str; 10] = [
    "", "primeiro", "segundo", "terceiro", "quarto", "quinto", "sexto", "sétimo", "oitavo",
    "nono",
];

const ORD_TENS: [&str; 10] = [
    "",
    "décimo",
    "vigésimo",
    "trigésimo",
    "quadragésimo",
    "quinquagésimo",
    "sexagésimo",
    "septuagésimo",
    "octogésimo",
    "nonagésimo",
];

const ORD_HUNDREDS: [&str; 10] = [
    "",
    "centésimo",
    "ducentésimo",
    "trecentésimo",
    "quadringentésimo",
    "quingentésimo",
    "sexcentésimo",
    "septingentésimo",
    "octingentésimo",
    "nongentésimo",
];

fn under_20(n: u64, gender: Gender) -> String {
    match (n, gender) {
        (1, Gender::Feminine) => "uma".to_string(),
        (2, Gender::Feminine) => "duas".to_string(),
        _ => UNITS[n as usize].to_string(),
    }
}

fn under_100(n: u64, gender: Gender) -> String {
    debug_assert!(n < 100);
    if n < 20 {
        under_20(n, gender)
    } else if n % 10 == 0 {
        TENS[(n / 10) as usize].to_string()
    } else {
        format!("{} e {}", TENS[(n / 10) as usize], under_20(n % 10, gender))
    }
}

fn under_1000(n: u64, gender: Gender) -> String {
    debug_assert!(n < 1000);
    if n < 100 {
        return under_100(n, gender);
    }
    if n == 100 {
        return "cem".to_string();
    }
    let mut hundred = HUNDREDS[(n / 100) as usize].to_string();
    if gender == Gender::Feminine && hundred.ends_with("os") {
        hundred = format!("{}as", &hundred[..hundred.len() - 2]);
    }
    if n % 100 == 0 {
        hundred
    } else {
        format!("{} e {}", hundred, under_100(n % 100, gender))
    }
}

/// Renders a cardinal as Portuguese words (space-separated, lowercase).
pub fn cardinal(n: u64, gender: Gender) -> Result<String, NormalizeError> {
    if n > CARDINAL_MAX {
        return Err(NormalizeError::NumberOutOfRange {
            literal: n.to_string(),
        });
    }
    if n == 0 {
        return Ok("zero".to_string());
    }

    let millions = n / 1_000_000;
    let thousands = (n / 1000) % 1000;
    let units = n % 1000;

    // (text, group value) for each non-zero group, most significant first.
    let mut groups: Vec<(String, u64)> = Vec::new();
    if millions > 0 {
        let word = if millions == 1 { "milhão" } else { "milhões" };
        // The noun "milhão" is masculine, whatever is being counted.
        groups.push((
            format!("{} {}", under_1000(millions, Gender::Masculine), word),
            millions,
        ));
    }
    if thousands > 0 {
        let text = if thousands == 1 {
            "mil".to_string()
        } else {
            format!("{} mil", under_1000(thousands, gender))
        };
        groups.push((text, thousands));
    }
    if units > 0 {
        groups.push((under_1000(units, gender), units));
    }

    let mut out = String::new();
    let last = groups.len() - 1;
    for (i, (text, value)) in groups.iter().enumerate() {
        if i > 0 {
            // "e" joins the final group when it is small or a round hundred:
            // "dois mil e um", "mil e duzentos", but "mil duzentos e um".
            if i == last && (*value < 100 || *value % 100 == 0) {
                out.push_str(" e ");
            } else {
                out.push(' ');
            }
        }
        out.push_str(text);
    }
    Ok(out)
}

/// Renders an ordinal (1..=1000) as Portuguese words.
pub fn ordinal(n: u64, gender: Gender) -> Result<String, NormalizeError> {
    if n == 0 || n > ORDINAL_MAX {
        return Err(NormalizeError::NumberOutOfRange {
            literal: format!("{n}º"),
        });
    }
    let mut words: Vec<&str> = Vec::new();
    if n == 1000 {
        words.push("milésimo");
    } else {
        words.push(ORD_HUNDREDS[(n / 100) as usize]);
        words.push(ORD_TENS[((n / 10) % 10) as usize]);
        words.push(ORD_UNITS[(n % 10) as usize]);
    }
    let joined = words
        .into_iter()
        .filter(|w| !w.is_empty())
        .map(|w| match gender {
            Gender::Masculine => w.to_string(),
            // Every ordinal component ends in -o; the feminine is -a.
            Gender::Feminine => format!("{}a", &w[..w.len() - 1]),
        })
        .collect::<Vec<_>>()
        .join(" ");
    Ok(joined)
}
