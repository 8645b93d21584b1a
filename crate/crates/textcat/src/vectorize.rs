//! Application of the learned dictionaries: texts to feature texts to
//! fixed-length vectors, plus the character tri-gram baseline extractor.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{tokenize, LabeledCorpus};
use crate::error::{Error, Result};
use crate::lexlearn::{FeatureDictionary, FeatureKind, StopWordDictionary};

/// How feature occurrences are scored into vector coordinates. Binary is
/// the default; recognition accuracy is not much affected by the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Binary,
    Frequency,
    /// Occurrence count times `ln(N / document frequency)` with document
    /// frequencies counted on the training corpus.
    InverseDocumentFrequency,
}

impl Weighting {
    pub fn as_str(&self) -> &'static str {
        match self {
            Weighting::Binary => "binary",
            Weighting::Frequency => "frequency",
            Weighting::InverseDocumentFrequency => "idf",
        }
    }
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(Weighting::Binary),
            "frequency" => Ok(Weighting::Frequency),
            "idf" => Ok(Weighting::InverseDocumentFrequency),
            other => Err(Error::config(format!(
                "unknown weighting '{other}' (expected binary|frequency|idf)"
            ))),
        }
    }
}

/// How a word form maps to dictionary features: the longest contained
/// feature only, or every contained feature. Trigram dictionaries always
/// emit every matching window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchPolicy {
    Longest,
    All,
}

impl MatchPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatchPolicy::Longest => "longest",
            MatchPolicy::All => "all",
        }
    }
}

impl std::str::FromStr for MatchPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "longest" => Ok(MatchPolicy::Longest),
            "all" => Ok(MatchPolicy::All),
            other => Err(Error::config(format!(
                "unknown match policy '{other}' (expected longest|all)"
            ))),
        }
    }
}

/// Fixed-length document representation; dimension equals the dictionary
/// size L.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub weighting: Weighting,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Convert a text into its feature text: tokenize, eliminate stop words,
/// replace each remaining word form by dictionary features contained in
/// it, delete forms containing no feature.
pub fn to_feature_text(
    text: &str,
    stop: &StopWordDictionary,
    feats: &FeatureDictionary,
    policy: MatchPolicy,
) -> Vec<String> {
    let mut out = Vec::new();
    for token in tokenize(text) {
        if stop.contains(&token) {
            continue;
        }
        match feats.kind() {
            FeatureKind::Learned => match_learned(&token, feats, policy, &mut out),
            FeatureKind::Trigram => match_trigrams(&token, feats, &mut out),
        }
    }
    out
}

fn match_learned(
    token: &str,
    feats: &FeatureDictionary,
    policy: MatchPolicy,
    out: &mut Vec<String>,
) {
    match policy {
        MatchPolicy::Longest => {
            // Longest contained feature wins; ties break on the earliest
            // match position, then lexicographically.
            let mut best: Option<(usize, usize, &str)> = None;
            for entry in feats.entries() {
                let f = entry.text.as_str();
                if f.len() > token.len() {
                    continue;
                }
                if let Some(pos) = token.find(f) {
                    let len = f.chars().count();
                    let better = match best {
                        None => true,
                        Some((blen, bpos, bf)) => {
                            (len, std::cmp::Reverse(pos), std::cmp::Reverse(f))
                                > (blen, std::cmp::Reverse(bpos), std::cmp::Reverse(bf))
                        }
                    };
                    if better {
                        best = Some((len, pos, f));
                    }
                }
            }
            if let Some((_, _, f)) = best {
                out.push(f.to_string());
            }
        }
        MatchPolicy::All => {
            for entry in feats.entries() {
                if token.contains(entry.text.as_str()) {
                    out.push(entry.text.clone());
                }
            }
        }
    }
}

/// Boundary marker used when extracting and matching character tri-grams.
pub const TRIGRAM_BOUNDARY: char = '_';

fn padded_trigrams(token: &str) -> Vec<String> {
    let mut chars: Vec<char> = Vec::with_capacity(token.chars().count() + 2);
    chars.push(TRIGRAM_BOUNDARY);
    chars.extend(token.chars());
    chars.push(TRIGRAM_BOUNDARY);
    chars.windows(3).map(|w| w.iter().collect()).collect()
}

fn match_trigrams(token: &str, feats: &FeatureDictionary, out: &mut Vec<String>) {
    for gram in padded_trigrams(token) {
        if feats.index_of(&gram).is_some() {
            out.push(gram);
        }
    }
}

/// Score a feature text into a vector of dictionary dimension. Every
/// feature string must come from the dictionary.
pub fn to_vector(
    feature_text: &[String],
    feats: &FeatureDictionary,
    weighting: Weighting,
) -> Result<FeatureVector> {
    let mut counts = vec![0u64; feats.len()];
    for f in feature_text {
        let idx = feats.index_of(f).ok_or_else(|| {
            Error::internal(format!("feature text contains unknown feature '{f}'"))
        })?;
        counts[idx] += 1;
    }
    let values = match weighting {
        Weighting::Binary => counts
            .iter()
            .map(|&c| if c > 0 { 1.0 } else { 0.0 })
            .collect(),
        Weighting::Frequency => counts.iter().map(|&c| c as f64).collect(),
        Weighting::InverseDocumentFrequency => {
            let n = feats.n_docs();
            if n == 0 {
                return Err(Error::config(
                    "idf weighting needs document frequencies; finalize the dictionary on a training corpus first",
                ));
            }
            counts
                .iter()
                .zip(feats.entries())
                .map(|(&c, e)| {
                    let df = e.doc_frequency.max(1);
                    c as f64 * ((n as f64) / (df as f64)).ln()
                })
                .collect()
        }
    };
    Ok(FeatureVector { values, weighting })
}

/// Tokenize, screen stop words, match and score in one step.
pub fn vectorize_text(
    text: &str,
    stop: &StopWordDictionary,
    feats: &FeatureDictionary,
    policy: MatchPolicy,
    weighting: Weighting,
) -> Result<FeatureVector> {
    let ft = to_feature_text(text, stop, feats, policy);
    to_vector(&ft, feats, weighting)
}

/// Extract the top `m` character tri-grams of the corpus as a baseline
/// feature dictionary. Word forms are padded with a boundary marker on
/// both sides and stop words are removed first. If fewer than `m` distinct
/// tri-grams exist, all of them are returned with a warning.
pub fn trigram_features(
    corpus: &LabeledCorpus,
    stop: &StopWordDictionary,
    m: usize,
) -> Result<FeatureDictionary> {
    if m < 1 {
        return Err(Error::config("trigram count must be at least 1"));
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for doc in corpus.documents() {
        for token in tokenize(&doc.text) {
            if stop.contains(&token) {
                continue;
            }
            for gram in padded_trigrams(&token) {
                *counts.entry(gram).or_insert(0) += 1;
            }
        }
    }
    if counts.len() < m {
        log::warn!(
            "corpus yields only {} distinct tri-grams, fewer than the requested {m}; using all",
            counts.len()
        );
    }
    let mut rows: Vec<(String, u64)> = counts.into_iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows.truncate(m);
    Ok(FeatureDictionary::new(FeatureKind::Trigram, rows))
}

/// Count, for each dictionary feature, the number of corpus documents
/// whose feature text contains it. Returns the counts and the corpus size.
pub fn document_frequencies(
    corpus: &LabeledCorpus,
    stop: &StopWordDictionary,
    feats: &FeatureDictionary,
    policy: MatchPolicy,
) -> (Vec<u64>, u64) {
    let mut dfs = vec![0u64; feats.len()];
    for doc in corpus.documents() {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for f in to_feature_text(&doc.text, stop, feats, policy) {
            if let Some(idx) = feats.index_of(&f) {
                seen.insert(idx);
            }
        }
        for idx in seen {
            dfs[idx] += 1;
        }
    }
    (dfs, corpus.len() as u64)
}

/// Debug rendering: each input line followed by `>> feature feature …`.
pub fn feature_text_dump(
    text: &str,
    stop: &StopWordDictionary,
    feats: &FeatureDictionary,
    policy: MatchPolicy,
) -> String {
    let mut out = String::new();
    for line in text.lines() {
        out.push_str(line);
        out.push('\n');
        out.push_str(">>");
        for f in to_feature_text(line, stop, feats, policy) {
            out.push(' ');
            out.push_str(&f);
        }
        out.push('\n');
    }
    out
}

/// One line of a vector dump: `doc_id<TAB>label<TAB>coordinates`.
pub fn vector_dump_line(doc_id: &str, label: &str, v: &FeatureVector) -> String {
    let coords: Vec<String> = v.values.iter().map(|x| format!("{x}")).collect();
    format!("{doc_id}\t{label}\t{}", coords.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;
    use crate::corpus::WordFormList;
    use crate::lexlearn::find_stop_words;
    use proptest::prelude::*;

    fn stopdict(words: &[&str]) -> StopWordDictionary {
        let list: WordFormList = words.iter().map(|w| (w.to_string(), 10u64)).collect();
        find_stop_words(&list, 1).unwrap()
    }

    fn dict(features: &[(&str, u64)]) -> FeatureDictionary {
        FeatureDictionary::new(
            FeatureKind::Learned,
            features.iter().map(|&(f, n)| (f.to_string(), n)).collect(),
        )
    }

    #[test]
    fn stop_words_are_eliminated() {
        let stop = stopdict(&["die"]);
        let feats = dict(&[("haus", 5)]);
        assert!(to_feature_text("die Die DIE", &stop, &feats, MatchPolicy::Longest).is_empty());
    }

    #[test]
    fn longest_contained_feature_wins() {
        let stop = stopdict(&[]);
        let feats = dict(&[("halb", 9), ("leiter", 8), ("technik", 7)]);
        // Brute force over the dictionary: contained features are halb (4),
        // leiter (6) and technik (7); the longest is technik.
        let ft = to_feature_text("halbleitertechnik", &stop, &feats, MatchPolicy::Longest);
        assert_eq!(ft, vec!["technik"]);
    }

    #[test]
    fn longest_tie_breaks_on_earliest_position() {
        let stop = stopdict(&[]);
        let feats = dict(&[("haus", 5), ("tier", 5)]);
        let ft = to_feature_text("haustier", &stop, &feats, MatchPolicy::Longest);
        assert_eq!(ft, vec!["haus"]);
    }

    #[test]
    fn match_all_emits_every_contained_feature() {
        let stop = stopdict(&[]);
        let feats = dict(&[("halb", 9), ("leiter", 8), ("technik", 7)]);
        let mut ft = to_feature_text("halbleitertechnik", &stop, &feats, MatchPolicy::All);
        ft.sort();
        assert_eq!(ft, vec!["halb", "leiter", "technik"]);
    }

    #[test]
    fn unmatched_forms_are_deleted() {
        let stop = stopdict(&[]);
        let feats = dict(&[("haus", 5)]);
        assert!(to_feature_text("wolke", &stop, &feats, MatchPolicy::Longest).is_empty());
    }

    #[test]
    fn empty_feature_text_gives_zero_vector() {
        let feats = dict(&[("haus", 5), ("tier", 4)]);
        let v = to_vector(&[], &feats, Weighting::Binary).unwrap();
        assert_eq!(v.values, vec![0.0, 0.0]);
    }

    #[test]
    fn binary_and_frequency_scoring() {
        let feats = dict(&[("haus", 5)]);
        let ft = vec!["haus".to_string(), "haus".to_string()];
        let b = to_vector(&ft, &feats, Weighting::Binary).unwrap();
        assert_eq!(b.values, vec![1.0]);
        let f = to_vector(&ft, &feats, Weighting::Frequency).unwrap();
        assert_eq!(f.values, vec![2.0]);
    }

    #[test]
    fn idf_scoring_uses_document_frequencies() {
        let mut feats = dict(&[("haus", 5), ("tier", 4)]);
        feats.set_document_frequencies(&[2, 1], 4).unwrap();
        let ft = vec!["haus".to_string(), "haus".to_string()];
        let v = to_vector(&ft, &feats, Weighting::InverseDocumentFrequency).unwrap();
        assert!((v.values[0] - 2.0 * (4.0f64 / 2.0).ln()).abs() < 1e-12);
        assert_eq!(v.values[1], 0.0);
    }

    #[test]
    fn idf_without_document_frequencies_is_config_error() {
        let feats = dict(&[("haus", 5)]);
        let err = to_vector(&[], &feats, Weighting::InverseDocumentFrequency).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_feature_string_is_internal_error() {
        let feats = dict(&[("haus", 5)]);
        let err = to_vector(&["tier".to_string()], &feats, Weighting::Binary).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }

    fn corpus_of(texts: &[&str]) -> LabeledCorpus {
        let docs = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document {
                id: format!("d{i}"),
                text: t.to_string(),
                label: 0,
            })
            .collect();
        LabeledCorpus::new(docs, vec!["k".into()]).unwrap()
    }

    #[test]
    fn trigrams_of_a_word_use_boundary_padding() {
        // Window oracle over "_haus_": _ha hau aus us_.
        assert_eq!(padded_trigrams("haus"), vec!["_ha", "hau", "aus", "us_"]);
    }

    #[test]
    fn trigram_dictionary_takes_top_m_by_frequency() {
        let corpus = corpus_of(&["haus haus haus tier"]);
        let stop = stopdict(&[]);
        let feats = trigram_features(&corpus, &stop, 2).unwrap();
        assert_eq!(feats.len(), 2);
        assert_eq!(feats.kind(), FeatureKind::Trigram);
        // All "haus" grams have count 3; the lexicographically first two win.
        assert_eq!(feats.entries()[0].text, "_ha");
        assert_eq!(feats.entries()[1].text, "aus");
    }

    #[test]
    fn trigram_dictionary_smaller_corpus_returns_all() {
        let corpus = corpus_of(&["haus"]);
        let stop = stopdict(&[]);
        let feats = trigram_features(&corpus, &stop, 2500).unwrap();
        assert_eq!(feats.len(), 4);
    }

    #[test]
    fn trigram_extraction_respects_stop_words() {
        let corpus = corpus_of(&["die haus"]);
        let stop = stopdict(&["die"]);
        let feats = trigram_features(&corpus, &stop, 100).unwrap();
        assert!(feats.index_of("_di").is_none());
    }

    #[test]
    fn trigram_matching_at_vector_time() {
        let corpus = corpus_of(&["haus haus tier"]);
        let stop = stopdict(&[]);
        let feats = trigram_features(&corpus, &stop, 100).unwrap();
        let v = vectorize_text(
            "haus",
            &stop,
            &feats,
            MatchPolicy::Longest,
            Weighting::Binary,
        )
        .unwrap();
        let fired: usize = v.values.iter().map(|&x| x as usize).sum();
        assert_eq!(fired, 4);
    }

    #[test]
    fn document_frequency_counting() {
        let corpus = corpus_of(&["haus tier", "haus", "wolke"]);
        let stop = stopdict(&[]);
        let feats = dict(&[("haus", 5), ("tier", 4)]);
        let (dfs, n) = document_frequencies(&corpus, &stop, &feats, MatchPolicy::Longest);
        assert_eq!(n, 3);
        assert_eq!(dfs, vec![2, 1]);
    }

    #[test]
    fn feature_text_dump_format() {
        let stop = stopdict(&["die"]);
        let feats = dict(&[("haus", 5)]);
        let dump = feature_text_dump("die Haus.\nwolke", &stop, &feats, MatchPolicy::Longest);
        assert_eq!(dump, "die Haus.\n>> haus\nwolke\n>>\n");
    }

    #[test]
    fn vector_dump_line_format() {
        let v = FeatureVector {
            values: vec![1.0, 0.0],
            weighting: Weighting::Binary,
        };
        assert_eq!(
            vector_dump_line("a/1.txt", "alpha", &v),
            "a/1.txt\talpha\t1 0"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn binary_is_indicator_of_frequency(
            tokens in proptest::collection::vec("(haus|tier|wolke|berg)", 0..20),
        ) {
            let stop = stopdict(&[]);
            let feats = dict(&[("haus", 5), ("tier", 4), ("berg", 3)]);
            let text = tokens.join(" ");
            let b = vectorize_text(&text, &stop, &feats, MatchPolicy::Longest, Weighting::Binary).unwrap();
            let f = vectorize_text(&text, &stop, &feats, MatchPolicy::Longest, Weighting::Frequency).unwrap();
            prop_assert_eq!(b.values.len(), feats.len());
            for (bi, fi) in b.values.iter().zip(&f.values) {
                prop_assert_eq!(*bi, if *fi > 0.0 { 1.0 } else { 0.0 });
                prop_assert_eq!(fi.fract(), 0.0);
                prop_assert!(*fi >= 0.0);
            }
        }

        #[test]
        fn inserting_stop_words_never_changes_the_vector(
            tokens in proptest::collection::vec("(haus|tier|wolke)", 0..12),
            at in 0usize..12,
        ) {
            let stop = stopdict(&["die"]);
            let feats = dict(&[("haus", 5), ("tier", 4)]);
            let text = tokens.join(" ");
            let mut padded = tokens.clone();
            padded.insert(at.min(tokens.len()), "die".to_string());
            let with = padded.join(" ");
            let v1 = vectorize_text(&text, &stop, &feats, MatchPolicy::Longest, Weighting::Binary).unwrap();
            let v2 = vectorize_text(&with, &stop, &feats, MatchPolicy::Longest, Weighting::Binary).unwrap();
            prop_assert_eq!(v1, v2);
        }

        #[test]
        fn matching_is_sound(
            tokens in proptest::collection::vec("[a-z]{2,10}", 0..15),
        ) {
            // A set coordinate implies some non-stop token contains the feature.
            let stop = stopdict(&["und"]);
            let feats = dict(&[("haus", 5), ("tier", 4), ("ung", 3)]);
            let text = tokens.join(" ");
            let v = vectorize_text(&text, &stop, &feats, MatchPolicy::All, Weighting::Binary).unwrap();
            for (i, &x) in v.values.iter().enumerate() {
                if x == 1.0 {
                    let f = &feats.entries()[i].text;
                    let hit = tokenize(&text)
                        .into_iter()
                        .any(|t| !stop.contains(&t) && t.contains(f.as_str()));
                    prop_assert!(hit, "coordinate {i} ({f}) set without a containing token");
                }
            }
        }
    }
}
