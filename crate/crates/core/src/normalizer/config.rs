//! Normalizer configuration: filled-pause canonicalization, acronym
//! letter names, and number gender. Defaults ship in the binary; a TOML file
//! can override any table wholesale.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::numwords::Gender;
use crate::error::ConfigError;

/// Characters allowed in a normalized token: lowercase letters of the
/// Portuguese alphabet. No digits, punctuation or whitespace.
pub fn is_token_char(c: char) -> bool {
    matches!(
        c,
        'a'..='z' | 'à' | 'á' | 'â' | 'ã' | 'ç' | 'é' | 'ê' | 'í' | 'ó' | 'ô' | 'õ' | 'ú'
    )
}

/// A valid output token is non-empty and made only of token characters.
pub fn is_valid_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_token_char)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizerConfig {
    /// Gender used when expanding cardinals; ordinal marks (`º`/`ª`) carry
    /// their own gender.
    pub number_gender: Gender,
    /// Hesitation variants mapped to a canonical spelling. The inventory is
    /// provisional and meant to be tuned per corpus.
    pub filled_pauses: BTreeMap<String, String>,
    /// Portuguese name of each letter a–z, used to spell out acronyms.
    pub letter_names: BTreeMap<String, String>,
}

impl Default for NormalizerConfig {
    fn default() -> Self {
        let filled_pauses = [
            ("éh", "eh"),
            ("ahn", "ahn"),
            ("uhn", "uhn"),
            ("ah", "ah"),
            ("mhm", "mhm"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();

        let letter_names = [
            ('a', "á"),
            ('b', "bê"),
            ('c', "cê"),
            ('d', "dê"),
            ('e', "é"),
            ('f', "efe"),
            ('g', "gê"),
            ('h', "agá"),
            ('i', "i"),
            ('j', "jota"),
            ('k', "cá"),
            ('l', "ele"),
            ('m', "eme"),
            ('n', "ene"),
            ('o', "ó"),
            ('p', "pê"),
            ('q', "quê"),
            ('r', "erre"),
            ('s', "esse"),
            ('t', "tê"),
            ('u', "u"),
            ('v', "vê"),
            ('w', "dáblio"),
            ('x', "xis"),
            ('y', "ípsilon"),
            ('z', "zê"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();

        NormalizerConfig {
            number_gender: Gender::Masculine,
            filled_pauses,
            letter_names,
        }
    }
}

impl NormalizerConfig {
    /// Checks the table invariants: entries are valid tokens, canonical
    /// filled-pause forms are fixed points, and the letter-name table covers
    /// a–z.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (variant, canonical) in &self.filled_pauses {
            for entry in [variant, canonical] {
                if !is_valid_token(entry) {
                    return Err(ConfigError::InvalidEntry {
                        table: "filled_pauses",
                        entry: entry.clone(),
                    });
                }
            }
            if let Some(target) = self.filled_pauses.get(canonical) {
                if target != canonical {
                    return Err(ConfigError::RemappedCanonical {
                        canonical: canonical.clone(),
                        target: target.clone(),
                    });
                }
            }
        }
        for key in self.letter_names.keys() {
            if key.len() != 1 || !key.chars().all(|c| c.is_ascii_lowercase()) {
                return Err(ConfigError::InvalidEntry {
                    table: "letter_names",
                    entry: key.clone(),
                });
            }
        }
        for letter in 'a'..='z' {
            match self.letter_names.get(letter.to_string().as_str()) {
                None => return Err(ConfigError::MissingLetter { letter }),
                Some(name) if !is_valid_token(name) => {
                    return Err(ConfigError::InvalidEntry {
                        table: "letter_names",
                        entry: name.clone(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let config: NormalizerConfig = toml::from_str(text).map_err(Box::new)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub(crate) fn letter_name(&self, letter: char) -> String {
        self.letter_names
            .get(letter.to_string().as_str())
            .cloned()
            .unwrap_or_else(|| letter.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        NormalizerConfig::default().validate().unwrap();
    }

    #[test]
    fn toml_round_trip() {
        let config = NormalizerConfig::default();
        let text = config.to_toml_string();
        let reloaded = NormalizerConfig::from_toml_str(&text).unwrap();
        assert_eq!(config, reloaded);
    }

    #[test]
    fn partial_override_keeps_other_defaults() {
        let config = NormalizerConfig::from_toml_str("number_gender = \"feminine\"\n").unwrap();
        assert_eq!(config.number_gender, Gender::Feminine);
        assert_eq!(config.filled_pauses, NormalizerConfig::default().filled_pauses);
    }

    #[test]
    fn remapped_canonical_is_rejected() {
        let text = "[filled_pauses]\n\"éh\" = \"eh\"\neh = \"ah\"\nah = \"ah\"\n";
        assert!(matches!(
            NormalizerConfig::from_toml_str(text),
            Err(ConfigError::RemappedCanonical { .. })
        ));
    }

    #[test]
    fn invalid_token_entries_are_rejected() {
        let text = "[filled_pauses]\n\"Éh2\" = \"eh\"\n";
        assert!(matches!(
            NormalizerConfig::from_toml_str(text),
            Err(ConfigError::InvalidEntry { .. })
        ));
    }

    #[test]
    fn incomplete_letter_table_is_rejected() {
        let text = "[letter_names]\na = \"á\"\n";
        assert!(matches!(
            NormalizerConfig::from_toml_str(text),
            Err(ConfigError::MissingLetter { .. })
        ));
    }
}
