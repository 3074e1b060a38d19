//! Four nested case sets per inquiry, used to measure how much each
//! annotated phenomenon costs in WER/CER.
//!
//! Case 1 keeps every scoreable unit; case 2 drops units flagged for
//! incomprehension or hearing hypothesis; case 3 drops overlap units;
//! case 4 drops any flagged unit. Exclusion is whole-unit: the convention
//! annotates units, not sub-spans.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::metrics::{score_inquiry, InquiryScore, PooledScore, ScoreRecord};
use crate::normalizer::NormalizerConfig;
use crate::parser::{Inquiry, PhenomenonFlags};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4];

    /// Whether a unit with these flags belongs to the case.
    pub fn admits(self, flags: PhenomenonFlags) -> bool {
        match self {
            CaseId::Case1 => true,
            CaseId::Case2 => !(flags.incomprehension || flags.hypothesis),
            CaseId::Case3 => !flags.overlap,
            CaseId::Case4 => !flags.any(),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::Case1 => "case1",
            CaseId::Case2 => "case2",
            CaseId::Case3 => "case3",
            CaseId::Case4 => "case4",
        })
    }
}

/// Unit membership of one case, in unit order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSet {
    pub case_id: CaseId,
    pub unit_indices: Vec<usize>,
}

/// All four case sets of one inquiry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSets {
    pub sets: [CaseSet; 4],
}

impl CaseSets {
    pub fn get(&self, id: CaseId) -> &CaseSet {
        &self.sets[id as usize]
    }
}

/// Builds the four case sets from scoreable units (ignored units must
/// already be excluded). Degenerate inputs are fine: an all-flagged inquiry
/// just yields an empty case 4.
pub fn build_cases(units: &[(usize, PhenomenonFlags)]) -> CaseSets {
    let sets = CaseId::ALL.map(|case_id| CaseSet {
        case_id,
        unit_indices: units
            .iter()
            .filter(|&&(_, flags)| case_id.admits(flags))
            .map(|&(index, _)| index)
            .collect(),
    });
    CaseSets { sets }
}

/// Pools already-computed records over case membership. Pure in
/// (membership, records): rescoring from scratch gives the same numbers.
pub fn pool_cases(cases: &CaseSets, records: &[ScoreRecord]) -> BTreeMap<CaseId, PooledScore> {
    let by_index: BTreeMap<usize, &ScoreRecord> =
        records.iter().map(|r| (r.unit_index, r)).collect();
    cases
        .sets
        .iter()
        .map(|set| {
            let mut pooled = PooledScore::default();
            for index in &set.unit_indices {
                if let Some(record) = by_index.get(index) {
                    pooled.add_record(record);
                }
            }
            (set.case_id, pooled)
        })
        .collect()
}

/// Case scores of one inquiry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InquiryCaseScores {
    pub inquiry_id: String,
    pub cases: CaseSets,
    pub scores: BTreeMap<CaseId, PooledScore>,
    pub score: InquiryScore,
}

/// Normalizes, scores and pools an inquiry per case. Empty cases come back
/// with a zero `unit_count` pool, whose accessors report no data.
pub fn case_scores(
    inquiry: &Inquiry,
    hypotheses: &BTreeMap<usize, String>,
    cfg: &NormalizerConfig,
    normalize_hyps: bool,
) -> Result<InquiryCaseScores, MetricsError> {
    let score = score_inquiry(inquiry, hypotheses, cfg, normalize_hyps)?;
    let flags: Vec<(usize, PhenomenonFlags)> =
        score.scoreable.iter().map(|u| (u.index, u.flags)).collect();
    let cases = build_cases(&flags);
    let scores = pool_cases(&cases, &score.records);
    Ok(InquiryCaseScores {
        inquiry_id: inquiry.id.clone(),
        cases,
        scores,
        score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(incomprehension: bool, hypothesis: bool, overlap: bool) -> PhenomenonFlags {
        PhenomenonFlags {
            incomprehension,
            hypothesis,
            overlap,
        }
    }

    #[test]
    fn case_membership_follows_flags() {
        let units = vec![
            (1, flags(false, false, false)),
            (2, flags(false, false, true)),
            (3, flags(false, true, false)),
            (4, flags(true, false, true)),
        ];
        let cases = build_cases(&units);
        assert_eq!(cases.get(CaseId::Case1).unit_indices, vec![1, 2, 3, 4]);
        assert_eq!(cases.get(CaseId::Case2).unit_indices, vec![1, 2]);
        assert_eq!(cases.get(CaseId::Case3).unit_indices, vec![1, 3]);
        assert_eq!(cases.get(CaseId::Case4).unit_indices, vec![1]);
    }

    #[test]
    fn clean_inquiry_has_identical_cases() {
        let units = vec![(0, flags(false, false, false)), (1, flags(false, false, false))];
        let cases = build_cases(&units);
        for id in CaseId::ALL {
            assert_eq!(cases.get(id).unit_indices, vec![0, 1]);
        }
    }

    #[test]
    fn all_flagged_inquiry_empties_case4_without_error() {
        let units = vec![(0, flags(true, true, true)), (1, flags(true, false, true))];
        let cases = build_cases(&units);
        assert_eq!(cases.get(CaseId::Case1).unit_indices.len(), 2);
        assert!(cases.get(CaseId::Case4).unit_indices.is_empty());
    }

    #[test]
    fn case_algebra_on_fuzzed_flags() {
        use rand::{Rng, SeedableRng};
        use std::collections::BTreeSet;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..300 {
            let units: Vec<(usize, PhenomenonFlags)> = (0..rng.gen_range(0..40))
                .map(|i| (i, flags(rng.gen(), rng.gen(), rng.gen())))
                .collect();
            let cases = build_cases(&units);
            let set = |id: CaseId| -> BTreeSet<usize> {
                cases.get(id).unit_indices.iter().copied().collect()
            };
            let (c1, c2, c3, c4) = (
                set(CaseId::Case1),
                set(CaseId::Case2),
                set(CaseId::Case3),
                set(CaseId::Case4),
            );
            assert!(c2.is_subset(&c1) && c3.is_subset(&c1));
            assert!(c4.is_subset(&c2) && c4.is_subset(&c3));
            let intersection: BTreeSet<usize> = c2.intersection(&c3).copied().collect();
            assert_eq!(c4, intersection);

            // Dropping a unit never grows any case.
            if !units.is_empty() {
                let smaller = build_cases(&units[..units.len() - 1]);
                for id in CaseId::ALL {
                    assert!(smaller.get(id).unit_indices.len() <= cases.get(id).unit_indices.len());
                }
            }
        }
    }
}
