//! End-to-end check of the two annotated reference units against the
//! transcripts printed for four recognizers, at the published tolerances.

use std::collections::BTreeMap;

use nurc_eval::{
    parse_inquiry, score_inquiry, Genre, InquiryMeta, NormalizerConfig, Quality,
};

const TRANSCRIPT: &str = "\
e dão muito trabalho tem esses esses problemas de juvenTUde esses negócios [( ) (não está muito na idade né?)
é eu [soube que também provocou um certo ciúmes ahn ahn isso eu (não) soube né eu VI... lá eu senti... um certo ciúmes ter:: éh ter sido escolhido uma mulher
";

const ROW1_CANDIDO: &str =
    "mue dão muito trabalho tem esse s problemas de juventude esses negócio não não  uriamante ten";
const ROW1_FERREIRA: &str =
    "me dão muito trabalho tem eos problemas de juventude esses negócio n não furiamunto tem";
const ROW1_GROSMAN: &str =
    "que dá muito trabalho tem esses problemas de juventude esses negócios não uriamusic";
const ROW2_CANDIDO: &str = "e eu nsando que taambém provocou com certos filmes eu f isso eu soundão eu vi lá eu senti um certos filmes te tercido escolher de uma mulher";
const ROW2_FERREIRA: &str = "é eu souo que teambém posocou com certos filmes isso eu soundão eu vi lá eu senti um certos filmes te ter sido escolhir de uma mulher";
const ROW2_GROSMAN: &str = "e eu me que terão e provocou um certo filmes e isso eu sou eu vi lá eu senti um certo ciúmes e ter sido escolhido uma mulher";

fn score_pair(row1: &str, row2: &str) -> (f64, f64) {
    let meta = InquiryMeta {
        genre: Genre::D2,
        quality: Quality::Bad,
        duration_secs: 3812,
    };
    let parsed = parse_inquiry(TRANSCRIPT, "SP_D2_360", meta).unwrap();
    let hypotheses = BTreeMap::from([(0, row1.to_string()), (1, row2.to_string())]);
    let score = score_inquiry(
        &parsed.inquiry,
        &hypotheses,
        &NormalizerConfig::default(),
        true,
    )
    .unwrap();
    assert_eq!(score.records.len(), 2);
    (score.records[0].wer, score.records[1].wer)
}

#[test]
fn references_normalize_to_18_and_31_tokens() {
    let meta = InquiryMeta {
        genre: Genre::D2,
        quality: Quality::Bad,
        duration_secs: 3812,
    };
    let parsed = parse_inquiry(TRANSCRIPT, "SP_D2_360", meta).unwrap();
    let cfg = NormalizerConfig::default();
    let counts: Vec<usize> = parsed
        .inquiry
        .units
        .iter()
        .map(|u| {
            nurc_eval::normalize_unit(u, &cfg)
                .tokens()
                .map_or(0, <[String]>::len)
        })
        .collect();
    assert_eq!(counts, vec![18, 31]);
}

#[test]
fn published_wer_values_are_reproduced() {
    let within = |value: f64, target: f64, tol: f64| {
        assert!(
            (value - target).abs() <= tol,
            "wer {value:.4} not within {target} ± {tol}"
        );
    };

    let (row1, row2) = score_pair(ROW1_GROSMAN, ROW2_GROSMAN);
    within(row1, 0.44, 0.01);
    within(row2, 0.38, 0.06);

    let (row1, row2) = score_pair(ROW1_CANDIDO, ROW2_CANDIDO);
    within(row1, 0.50, 0.06);
    within(row2, 0.58, 0.06);

    let (row1, row2) = score_pair(ROW1_FERREIRA, ROW2_FERREIRA);
    within(row1, 0.55, 0.06);
    within(row2, 0.54, 0.06);
}
