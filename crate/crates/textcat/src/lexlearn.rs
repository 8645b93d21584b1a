//! Corpus-based learning of stop-word and feature dictionaries.
//!
//! The word-form frequency list of a training corpus is reduced to a
//! feature dictionary in six steps: statistical stop-word detection,
//! linguistic parameter application, statistical affix detection, iterative
//! splitting of complex word forms by simpler list members, affix
//! elimination with formative-variant merging, and frequency-threshold
//! selection. The resulting features lie between character n-grams and word
//! stems depending on text quality and language; no external lexicon is
//! involved.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::corpus::WordFormList;
use crate::error::{Error, Result};

/// Language-specific parameters the learner respects.
///
/// `consonant_clusters` are character strings that express a single
/// consonant and count as one character for the minimal-form rule;
/// `formative_elements` are short joining strings (German "s" in
/// compounds) that trigger merging of otherwise identical forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinguisticParams {
    pub vowels: BTreeSet<char>,
    pub consonant_clusters: BTreeSet<String>,
    pub min_chars: usize,
    pub formative_elements: BTreeSet<String>,
    pub max_affix_len: usize,
}

impl LinguisticParams {
    /// German profile. "qu" is left out of the cluster set because the
    /// validator rejects clusters containing a vowel character.
    pub fn german() -> Self {
        LinguisticParams {
            vowels: "aeiouäöüy".chars().collect(),
            consonant_clusters: ["sch", "ch", "ck", "ph", "th"]
                .into_iter()
                .map(String::from)
                .collect(),
            min_chars: 3,
            formative_elements: ["s"].into_iter().map(String::from).collect(),
            max_affix_len: 5,
        }
    }

    /// English profile; the orthography needs no cluster or formative
    /// handling for this purpose.
    pub fn english() -> Self {
        LinguisticParams {
            vowels: "aeiouy".chars().collect(),
            consonant_clusters: BTreeSet::new(),
            min_chars: 3,
            formative_elements: BTreeSet::new(),
            max_affix_len: 5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_chars < 1 {
            return Err(Error::config("min_chars must be at least 1"));
        }
        if self.vowels.is_empty() {
            return Err(Error::config("vowel set must not be empty"));
        }
        if self.max_affix_len < 1 {
            return Err(Error::config("max_affix_len must be at least 1"));
        }
        for cluster in &self.consonant_clusters {
            if cluster.is_empty() {
                return Err(Error::config("empty consonant cluster"));
            }
            if cluster.chars().any(|c| self.vowels.contains(&c)) {
                return Err(Error::config(format!(
                    "consonant cluster '{cluster}' contains a vowel character"
                )));
            }
        }
        for e in &self.formative_elements {
            if e.is_empty() {
                return Err(Error::config("empty formative element"));
            }
            if e.chars().count() >= self.min_chars {
                return Err(Error::config(format!(
                    "formative element '{e}' must be shorter than min_chars ({})",
                    self.min_chars
                )));
            }
        }
        Ok(())
    }
}

/// Character count of a form where each maximal left-to-right consonant
/// cluster match counts as one character; the longest cluster wins at each
/// position.
pub fn grapheme_length(form: &str, params: &LinguisticParams) -> usize {
    // Clusters are tried longest-first so "sch" beats "ch".
    let mut clusters: Vec<&str> = params
        .consonant_clusters
        .iter()
        .map(String::as_str)
        .collect();
    clusters.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut count = 0;
    let mut rest = form;
    'outer: while !rest.is_empty() {
        for cluster in &clusters {
            if rest.starts_with(cluster) {
                rest = &rest[cluster.len()..];
                count += 1;
                continue 'outer;
            }
        }
        let ch = rest.chars().next().unwrap();
        rest = &rest[ch.len_utf8()..];
        count += 1;
    }
    count
}

/// Minimal-form rule: at least `min_chars` counted characters and at least
/// one vowel. Digits never count as vowels, so pure numbers are invalid.
pub fn is_valid_form(form: &str, params: &LinguisticParams) -> bool {
    grapheme_length(form, params) >= params.min_chars
        && form.chars().any(|c| params.vowels.contains(&c))
}

/// Words removed from texts before feature matching: function words,
/// category-neutral domain terms, frequent recognition errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWordDictionary {
    words: BTreeSet<String>,
    threshold_used: u64,
}

impl StopWordDictionary {
    pub fn contains(&self, form: &str) -> bool {
        self.words.contains(form)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn threshold_used(&self) -> u64 {
        self.threshold_used
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// One form per line.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            out.push_str(w);
            out.push('\n');
        }
        out
    }

    pub fn from_lines(text: &str, threshold_used: u64) -> Self {
        StopWordDictionary {
            words: text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect(),
            threshold_used,
        }
    }
}

/// Forms with corpus frequency at or above the threshold become stop
/// words; the caller removes them from the working list.
pub fn find_stop_words(list: &WordFormList, threshold: u64) -> Result<StopWordDictionary> {
    if threshold < 1 {
        return Err(Error::config("stop-word threshold must be at least 1"));
    }
    let words = list
        .iter()
        .filter(|&(_, freq)| freq >= threshold)
        .map(|(form, _)| form.to_string())
        .collect();
    Ok(StopWordDictionary {
        words,
        threshold_used: threshold,
    })
}

/// Task-typical prefixes and suffixes with their accumulated
/// frequency-weighted counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AffixSet {
    pub prefixes: BTreeMap<String, u64>,
    pub suffixes: BTreeMap<String, u64>,
}

impl AffixSet {
    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty() && self.suffixes.is_empty()
    }
}

/// Learner configuration. The stop-word threshold is an absolute corpus
/// count by default; `Relative` converts a fraction of the total token
/// count into a count at learning time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopThreshold {
    Absolute(u64),
    Relative(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnConfig {
    pub stop_threshold: StopThreshold,
    pub affix_threshold: u64,
    pub feature_threshold: u64,
    pub params: LinguisticParams,
    /// Affix candidates added by hand, e.g. domain content words that are
    /// frequent parts of composites. Included even when they equal whole
    /// list forms.
    pub manual_prefixes: BTreeSet<String>,
    pub manual_suffixes: BTreeSet<String>,
    /// Affix candidates suppressed by hand.
    pub exclude_affixes: BTreeSet<String>,
}

impl LearnConfig {
    pub fn german() -> Self {
        LearnConfig {
            stop_threshold: StopThreshold::Absolute(100),
            affix_threshold: 50,
            feature_threshold: 5,
            params: LinguisticParams::german(),
            manual_prefixes: BTreeSet::new(),
            manual_suffixes: BTreeSet::new(),
            exclude_affixes: BTreeSet::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        match self.stop_threshold {
            StopThreshold::Absolute(t) if t < 1 => {
                return Err(Error::config("stop_threshold must be at least 1"));
            }
            StopThreshold::Relative(r) if !(r > 0.0 && r <= 1.0) => {
                return Err(Error::config("stop_relative must be in (0, 1]"));
            }
            _ => {}
        }
        if self.affix_threshold < 1 {
            return Err(Error::config("affix_threshold must be at least 1"));
        }
        if self.feature_threshold <= 2 {
            return Err(Error::config(
                "feature_threshold must be higher than 2: forms occurring once or twice are irrelevant",
            ));
        }
        Ok(())
    }

    /// Absolute stop-word threshold for a corpus of `total_tokens` tokens.
    pub fn effective_stop_threshold(&self, total_tokens: u64) -> u64 {
        match self.stop_threshold {
            StopThreshold::Absolute(t) => t,
            StopThreshold::Relative(r) => ((total_tokens as f64 * r).ceil() as u64).max(1),
        }
    }
}

/// Statistically determine typical affixes: frequency-weighted counts of
/// word-initial and word-final substrings up to `max_affix_len` characters.
/// Candidates that equal whole list forms are dropped unless whitelisted;
/// manual entries are always included.
pub fn find_affixes(list: &WordFormList, config: &LearnConfig) -> AffixSet {
    let max_len = config.params.max_affix_len;
    let mut pre_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut suf_counts: BTreeMap<String, u64> = BTreeMap::new();
    for (form, freq) in list.iter() {
        let chars: Vec<char> = form.chars().collect();
        if chars.len() < 2 {
            continue;
        }
        for k in 1..=max_len.min(chars.len() - 1) {
            let prefix: String = chars[..k].iter().collect();
            let suffix: String = chars[chars.len() - k..].iter().collect();
            *pre_counts.entry(prefix).or_insert(0) += freq;
            *suf_counts.entry(suffix).or_insert(0) += freq;
        }
    }

    let keep = |counts: BTreeMap<String, u64>, manual: &BTreeSet<String>| {
        let mut kept: BTreeMap<String, u64> = counts
            .iter()
            .filter(|(cand, &count)| {
                count >= config.affix_threshold
                    && !config.exclude_affixes.contains(*cand)
                    && (!list.contains(cand) || manual.contains(*cand))
            })
            .map(|(c, &n)| (c.clone(), n))
            .collect();
        for m in manual {
            if m.is_empty() {
                continue;
            }
            let count = counts.get(m).copied().unwrap_or(0);
            kept.insert(m.clone(), count.max(config.affix_threshold));
        }
        kept
    };

    AffixSet {
        prefixes: keep(pre_counts, &config.manual_prefixes),
        suffixes: keep(suf_counts, &config.manual_suffixes),
    }
}

/// One split performed by [`split_iteratively`]: `complex` was removed,
/// its frequency added to list member `part` and to `remainder`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitEvent {
    pub complex: String,
    pub part: String,
    pub remainder: String,
    /// Frequency of `complex` at split time; the amount moved to both parts.
    pub moved: u64,
    /// True when `part` matched at the start of `complex`.
    pub at_start: bool,
}

/// Instrumentation of a splitting run, used to verify the termination
/// bound (events never exceed the initial total character count) and the
/// per-cycle cost bound (substring tests per cycle stay within WF²).
#[derive(Debug, Clone, Default)]
pub struct SplitTrace {
    pub events: Vec<SplitEvent>,
    pub cycles: usize,
    /// (substring tests, largest list size) per cycle.
    pub cycle_costs: Vec<(u64, usize)>,
}

/// Iteratively split complex word forms into simpler list members.
///
/// Cycles run until a full pass performs no split. Within a cycle, forms
/// are visited by descending grapheme length (ties lexicographic); for
/// each form the longest list member matching at the start is preferred,
/// otherwise the longest matching at the end, and a split requires both
/// the member and the remainder to satisfy the minimal-form rule. The
/// frequency of the complex form is added to the member's count and to
/// the remainder (inserted if new), so parts produced by one cycle can
/// split other forms in later cycles.
pub fn split_iteratively(list: WordFormList, params: &LinguisticParams) -> WordFormList {
    split_iteratively_traced(list, params).0
}

pub fn split_iteratively_traced(
    mut list: WordFormList,
    params: &LinguisticParams,
) -> (WordFormList, SplitTrace) {
    let mut trace = SplitTrace::default();
    let event_bound = list.total_chars();
    loop {
        let mut snapshot: Vec<(String, usize)> = list
            .forms()
            .map(|f| (f.to_string(), grapheme_length(f, params)))
            .collect();
        snapshot.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

        trace.cycles += 1;
        let mut comparisons: u64 = 0;
        let mut max_len = list.len();
        let mut split_in_cycle = false;

        for (form, _) in &snapshot {
            if !list.contains(form) {
                continue;
            }
            if let Some((part, remainder, at_start)) =
                find_split(&list, form, params, &mut comparisons)
            {
                let moved = list.remove(form).expect("form present");
                list.add(&part, moved);
                list.add(&remainder, moved);
                trace.events.push(SplitEvent {
                    complex: form.clone(),
                    part,
                    remainder,
                    moved,
                    at_start,
                });
                split_in_cycle = true;
                max_len = max_len.max(list.len());
            }
        }
        trace.cycle_costs.push((comparisons, max_len));
        if !split_in_cycle {
            break;
        }
        debug_assert!(trace.events.len() <= event_bound, "split bound exceeded");
    }
    (list, trace)
}

/// Longest valid member matching at the start of `form`, else at the end.
/// Both the member and the remainder must satisfy the minimal-form rule.
fn find_split(
    list: &WordFormList,
    form: &str,
    params: &LinguisticParams,
    comparisons: &mut u64,
) -> Option<(String, String, bool)> {
    let form_chars = form.chars().count();
    let mut best_prefix: Option<&str> = None;
    let mut best_suffix: Option<&str> = None;
    for (member, _) in list.iter() {
        *comparisons += 1;
        if member == form {
            continue;
        }
        let member_chars = member.chars().count();
        if member_chars >= form_chars {
            continue;
        }
        if form.starts_with(member)
            && best_prefix.is_none_or(|b| member_chars > b.chars().count())
            && is_valid_form(member, params)
            && is_valid_form(&form[member.len()..], params)
        {
            best_prefix = Some(member);
        }
        if form.ends_with(member)
            && best_suffix.is_none_or(|b| member_chars > b.chars().count())
            && is_valid_form(member, params)
            && is_valid_form(&form[..form.len() - member.len()], params)
        {
            best_suffix = Some(member);
        }
    }
    if let Some(part) = best_prefix {
        let remainder = form[part.len()..].to_string();
        return Some((part.to_string(), remainder, true));
    }
    if let Some(part) = best_suffix {
        let remainder = form[..form.len() - part.len()].to_string();
        return Some((part.to_string(), remainder, false));
    }
    None
}

/// Shorten every form by repeatedly removing the longest matching listed
/// suffix, then the longest matching listed prefix, while the remaining
/// string still satisfies the minimal-form rule. Forms that become equal
/// merge with summed frequencies.
pub fn strip_affixes(
    list: WordFormList,
    affixes: &AffixSet,
    params: &LinguisticParams,
) -> WordFormList {
    let mut suffixes: Vec<&str> = affixes.suffixes.keys().map(String::as_str).collect();
    suffixes.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));
    let mut prefixes: Vec<&str> = affixes.prefixes.keys().map(String::as_str).collect();
    prefixes.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));

    let mut out = WordFormList::new();
    for (form, freq) in list.iter() {
        let mut cur = form.to_string();
        loop {
            let mut changed = false;
            while let Some(rest) = strip_one(&cur, &suffixes, params, false) {
                cur = rest;
                changed = true;
            }
            while let Some(rest) = strip_one(&cur, &prefixes, params, true) {
                cur = rest;
                changed = true;
            }
            if !changed {
                break;
            }
        }
        out.add(&cur, freq);
    }
    out
}

fn strip_one(
    form: &str,
    affixes_longest_first: &[&str],
    params: &LinguisticParams,
    front: bool,
) -> Option<String> {
    for affix in affixes_longest_first {
        if affix.len() >= form.len() {
            continue;
        }
        let rest = if front {
            if !form.starts_with(affix) {
                continue;
            }
            &form[affix.len()..]
        } else {
            if !form.ends_with(affix) {
                continue;
            }
            &form[..form.len() - affix.len()]
        };
        if is_valid_form(rest, params) {
            return Some(rest.to_string());
        }
    }
    None
}

/// Merge form pairs that differ only by a leading or trailing formative
/// element into the shorter form, summing frequencies. Forms are visited
/// by descending length so chains collapse fully; the trailing position is
/// checked before the leading one.
pub fn merge_formative_variants(mut list: WordFormList, params: &LinguisticParams) -> WordFormList {
    if params.formative_elements.is_empty() {
        return list;
    }
    let mut elements: Vec<String> = params.formative_elements.iter().cloned().collect();
    elements.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));

    loop {
        let mut snapshot: Vec<String> = list.forms().map(String::from).collect();
        snapshot.sort_by(|a, b| {
            b.chars()
                .count()
                .cmp(&a.chars().count())
                .then_with(|| a.cmp(b))
        });
        let mut changed = false;
        for form in &snapshot {
            if !list.contains(form) {
                continue;
            }
            let base = elements.iter().find_map(|e| {
                if form.len() > e.len() && form.ends_with(e.as_str()) {
                    let b = &form[..form.len() - e.len()];
                    if list.contains(b) {
                        return Some(b.to_string());
                    }
                }
                None
            });
            let base = base.or_else(|| {
                elements.iter().find_map(|e| {
                    if form.len() > e.len() && form.starts_with(e.as_str()) {
                        let b = &form[e.len()..];
                        if list.contains(b) {
                            return Some(b.to_string());
                        }
                    }
                    None
                })
            });
            if let Some(base) = base {
                let freq = list.remove(form).expect("form present");
                list.add(&base, freq);
                changed = true;
            }
        }
        if !changed {
            return list;
        }
    }
}

/// What a feature dictionary was built from; trigram dictionaries match
/// padded character windows instead of substrings and are exempt from the
/// minimal-form rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Learned,
    Trigram,
}

impl FeatureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeatureKind::Learned => "learned",
            FeatureKind::Trigram => "trigram",
        }
    }
}

impl std::str::FromStr for FeatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "learned" => Ok(FeatureKind::Learned),
            "trigram" => Ok(FeatureKind::Trigram),
            other => Err(Error::config(format!(
                "unknown feature kind '{other}' (expected learned|trigram)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureEntry {
    pub text: String,
    pub frequency: u64,
    /// Training documents the feature fired in; zero until the dictionary
    /// is finalized against a corpus.
    pub doc_frequency: u64,
}

/// The learned feature inventory. Entry order is the vector coordinate
/// order: descending frequency, ties lexicographic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureDictionary {
    kind: FeatureKind,
    entries: Vec<FeatureEntry>,
    index: HashMap<String, usize>,
    /// Size of the corpus used for document frequencies (0 = not counted).
    n_docs: u64,
}

impl FeatureDictionary {
    /// Build from (feature, frequency) pairs; sorts into canonical order.
    pub fn new(kind: FeatureKind, features: Vec<(String, u64)>) -> Self {
        let mut rows = features;
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let entries: Vec<FeatureEntry> = rows
            .into_iter()
            .map(|(text, frequency)| FeatureEntry {
                text,
                frequency,
                doc_frequency: 0,
            })
            .collect();
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.text.clone(), i))
            .collect();
        FeatureDictionary {
            kind,
            entries,
            index,
            n_docs: 0,
        }
    }

    pub fn from_entries(kind: FeatureKind, entries: Vec<FeatureEntry>, n_docs: u64) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.text.clone(), i))
            .collect();
        FeatureDictionary {
            kind,
            entries,
            index,
            n_docs,
        }
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    /// Vector length L.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FeatureEntry] {
        &self.entries
    }

    pub fn index_of(&self, feature: &str) -> Option<usize> {
        self.index.get(feature).copied()
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    /// Record per-feature document frequencies counted on `n_docs`
    /// training documents.
    pub fn set_document_frequencies(&mut self, doc_freqs: &[u64], n_docs: u64) -> Result<()> {
        if doc_freqs.len() != self.entries.len() {
            return Err(Error::internal(format!(
                "document-frequency vector has length {} for {} features",
                doc_freqs.len(),
                self.entries.len()
            )));
        }
        for (e, &df) in self.entries.iter_mut().zip(doc_freqs) {
            e.doc_frequency = df;
        }
        self.n_docs = n_docs;
        Ok(())
    }

    /// `index<TAB>feature<TAB>frequency` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!("{i}\t{}\t{}\n", e.text, e.frequency));
        }
        out
    }

    pub fn from_tsv(kind: FeatureKind, text: &str) -> Result<Self> {
        let mut features = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let idx: usize = cols
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| Error::input(format!("line {}: bad feature index", lineno + 1)))?;
            let feat = cols
                .next()
                .ok_or_else(|| Error::input(format!("line {}: missing feature", lineno + 1)))?;
            let freq: u64 = cols
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| Error::input(format!("line {}: bad frequency", lineno + 1)))?;
            if idx != features.len() {
                return Err(Error::input(format!(
                    "line {}: feature index {idx} out of order",
                    lineno + 1
                )));
            }
            features.push((feat.to_string(), freq));
        }
        let entries = features
            .into_iter()
            .map(|(text, frequency)| FeatureEntry {
                text,
                frequency,
                doc_frequency: 0,
            })
            .collect();
        Ok(Self::from_entries(kind, entries, 0))
    }
}

/// Select the genuine features from the list of final forms: frequency at
/// or above `threshold` and conforming to the minimal-form rule. The
/// threshold must be higher than 2.
pub fn select_features(
    list: &WordFormList,
    threshold: u64,
    params: &LinguisticParams,
) -> Result<FeatureDictionary> {
    if threshold <= 2 {
        return Err(Error::config(
            "feature threshold must be higher than 2: forms occurring once or twice are irrelevant",
        ));
    }
    let features: Vec<(String, u64)> = list
        .iter()
        .filter(|&(form, freq)| freq >= threshold && is_valid_form(form, params))
        .map(|(form, freq)| (form.to_string(), freq))
        .collect();
    Ok(FeatureDictionary::new(FeatureKind::Learned, features))
}

/// Per-stage counts reported by [`learn_dictionaries`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LearnReport {
    pub total_tokens: u64,
    pub initial_forms: usize,
    pub stop_threshold_used: u64,
    pub stop_words: usize,
    pub forms_after_stop: usize,
    pub prefixes_found: usize,
    pub suffixes_found: usize,
    pub split_events: usize,
    pub split_cycles: usize,
    pub forms_after_split: usize,
    pub forms_after_strip: usize,
    pub forms_after_merge: usize,
    pub features_selected: usize,
}

impl LearnReport {
    pub fn render(&self) -> String {
        format!(
            "tokens {}  forms {}\nstop words {} (threshold {})  forms left {}\n\
             affixes {} prefixes / {} suffixes\nsplits {} in {} cycles -> {} forms\n\
             after affix elimination {} forms, after merging {} forms\nfeatures selected {}",
            self.total_tokens,
            self.initial_forms,
            self.stop_words,
            self.stop_threshold_used,
            self.forms_after_stop,
            self.prefixes_found,
            self.suffixes_found,
            self.split_events,
            self.split_cycles,
            self.forms_after_split,
            self.forms_after_strip,
            self.forms_after_merge,
            self.features_selected,
        )
    }
}

/// Run the full dictionary-learning pipeline on a corpus: collect word
/// forms, extract and remove stop words, compute affixes, split
/// iteratively, eliminate affixes, merge formative variants, select
/// features. Fails if no feature survives selection.
pub fn learn_dictionaries(
    corpus: &crate::corpus::LabeledCorpus,
    config: &LearnConfig,
) -> Result<(StopWordDictionary, FeatureDictionary, LearnReport)> {
    config.validate()?;
    let mut report = LearnReport::default();

    let list = crate::corpus::build_wordform_list(corpus);
    report.total_tokens = list.total_mass();
    report.initial_forms = list.len();

    let stop_threshold = config.effective_stop_threshold(report.total_tokens);
    report.stop_threshold_used = stop_threshold;
    let stop = find_stop_words(&list, stop_threshold)?;
    report.stop_words = stop.len();

    let mut working = WordFormList::new();
    for (form, freq) in list.iter() {
        if !stop.contains(form) {
            working.add(form, freq);
        }
    }
    report.forms_after_stop = working.len();

    let affixes = find_affixes(&working, config);
    report.prefixes_found = affixes.prefixes.len();
    report.suffixes_found = affixes.suffixes.len();

    let (split, trace) = split_iteratively_traced(working, &config.params);
    report.split_events = trace.events.len();
    report.split_cycles = trace.cycles;
    report.forms_after_split = split.len();

    let stripped = strip_affixes(split, &affixes, &config.params);
    report.forms_after_strip = stripped.len();

    let merged = merge_formative_variants(stripped, &config.params);
    report.forms_after_merge = merged.len();

    let features = select_features(&merged, config.feature_threshold, &config.params)?;
    report.features_selected = features.len();
    if features.is_empty() {
        return Err(Error::config(format!(
            "no features survived selection (threshold {}); lower feature_threshold or provide more data",
            config.feature_threshold
        )));
    }
    Ok((stop, features, report))
}
