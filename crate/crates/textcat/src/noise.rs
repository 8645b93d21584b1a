//! Seeded simulation of recognition noise: character substitutions and
//! segmentation errors (spurious blanks inside words).
//!
//! The simulator stands in for a document-analysis front end during
//! testing; it never touches labels, only text. Corruption is a pure
//! function of (model, seed, text): the per-text random stream is derived
//! from the model seed and a stable hash of the text, so identical texts
//! corrupt identically and corpus corruption does not depend on document
//! order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::LabeledCorpus;
use crate::error::{Error, Result};

/// Character confusion table plus a blank-insertion rate.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    /// Per-character substitution: original → (replacement, probability).
    substitutions: BTreeMap<char, (char, f64)>,
    /// Probability of inserting a blank between two adjacent non-blank
    /// characters.
    segmentation: f64,
    seed: u64,
}

/// Counts accumulated while corrupting; word accuracy is the share of
/// whitespace-delimited words reproduced without any change inside them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NoiseStats {
    pub chars_total: u64,
    pub chars_changed: u64,
    pub words_total: u64,
    pub words_changed: u64,
}

impl NoiseStats {
    pub fn char_accuracy(&self) -> f64 {
        if self.chars_total == 0 {
            1.0
        } else {
            1.0 - self.chars_changed as f64 / self.chars_total as f64
        }
    }

    pub fn word_accuracy(&self) -> f64 {
        if self.words_total == 0 {
            1.0
        } else {
            1.0 - self.words_changed as f64 / self.words_total as f64
        }
    }

    pub fn absorb(&mut self, other: NoiseStats) {
        self.chars_total += other.chars_total;
        self.chars_changed += other.chars_changed;
        self.words_total += other.words_total;
        self.words_changed += other.words_changed;
    }
}

impl NoiseModel {
    pub fn new(
        substitutions: BTreeMap<char, (char, f64)>,
        segmentation: f64,
        seed: u64,
    ) -> Result<Self> {
        let model = NoiseModel {
            substitutions,
            segmentation,
            seed,
        };
        model.validate()?;
        Ok(model)
    }

    /// No-op model, useful as a parsing/plumbing baseline.
    pub fn identity(seed: u64) -> Self {
        NoiseModel {
            substitutions: BTreeMap::new(),
            segmentation: 0.0,
            seed,
        }
    }

    /// Confusion table typical of printed-document recognition, tuned to
    /// land near 84% word accuracy on running text with 6-7 character
    /// words.
    pub fn ocr_preset(seed: u64) -> Self {
        let subs = [
            ('a', ('o', 0.045)),
            ('e', ('o', 0.045)),
            ('i', ('l', 0.045)),
            ('o', ('c', 0.045)),
            ('u', ('v', 0.045)),
            ('l', ('i', 0.03)),
            ('n', ('m', 0.03)),
            ('t', ('f', 0.03)),
            ('s', ('z', 0.03)),
            ('k', ('h', 0.03)),
        ];
        NoiseModel {
            substitutions: subs.into_iter().collect(),
            segmentation: 0.004,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (from, (to, p)) in &self.substitutions {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::config(format!(
                    "substitution probability {p} for '{from}'->'{to}' outside [0,1]"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.segmentation) {
            return Err(Error::config("segmentation probability outside [0,1]"));
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Parse a noise description: `seed = N`, `segmentation = P`, and one
    /// `sub = FROM TO PROB` line per confusion pair.
    pub fn parse(text: &str) -> Result<Self> {
        let mut substitutions = BTreeMap::new();
        let mut segmentation = 0.0;
        let mut seed = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("noise line {}: expected 'key = value'", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "seed" => {
                    seed = value.parse().map_err(|_| {
                        Error::config(format!("noise line {}: bad seed '{value}'", lineno + 1))
                    })?;
                }
                "segmentation" => {
                    segmentation = value.parse().map_err(|_| {
                        Error::config(format!(
                            "noise line {}: bad probability '{value}'",
                            lineno + 1
                        ))
                    })?;
                }
                "sub" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let bad = || {
                        Error::config(format!(
                            "noise line {}: expected 'sub = FROM TO PROB'",
                            lineno + 1
                        ))
                    };
                    if parts.len() != 3 {
                        return Err(bad());
                    }
                    let from = single_char(parts[0]).ok_or_else(bad)?;
                    let to = single_char(parts[1]).ok_or_else(bad)?;
                    let p: f64 = parts[2].parse().map_err(|_| bad())?;
                    substitutions.insert(from, (to, p));
                }
                other => {
                    return Err(Error::config(format!(
                        "noise line {}: unknown key '{other}'",
                        lineno + 1
                    )));
                }
            }
        }
        NoiseModel::new(substitutions, segmentation, seed)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "segmentation = {}", self.segmentation);
        for (from, (to, p)) in &self.substitutions {
            let _ = writeln!(out, "sub = {from} {to} {p}");
        }
        out
    }

    pub fn corrupt(&self, text: &str) -> String {
        self.corrupt_with_stats(text).0
    }

    /// Corrupt one text, reporting character- and word-level accuracy.
    pub fn corrupt_with_stats(&self, text: &str) -> (String, NoiseStats) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a64(text.as_bytes()));
        let mut out = String::with_capacity(text.len() + 8);
        let mut stats = NoiseStats::default();
        let chars: Vec<char> = text.chars().collect();
        let mut in_word = false;
        let mut word_changed = false;

        for (i, &ch) in chars.iter().enumerate() {
            if ch.is_whitespace() {
                if in_word {
                    stats.words_total += 1;
                    stats.words_changed += u64::from(word_changed);
                    in_word = false;
                    word_changed = false;
                }
                out.push(ch);
                continue;
            }
            in_word = true;
            stats.chars_total += 1;
            let mut emitted = ch;
            if let Some(&(to, p)) = self.substitutions.get(&ch) {
                if rng.gen::<f64>() < p {
                    emitted = to;
                }
            }
            if emitted != ch {
                stats.chars_changed += 1;
                word_changed = true;
            }
            out.push(emitted);
            let next_is_word = chars.get(i + 1).is_some_and(|c| !c.is_whitespace());
            if next_is_word && self.segmentation > 0.0 && rng.gen::<f64>() < self.segmentation {
                out.push(' ');
                word_changed = true;
            }
        }
        if in_word {
            stats.words_total += 1;
            stats.words_changed += u64::from(word_changed);
        }
        (out, stats)
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut chars = s.chars();
    let c = chars.next()?;
    chars.next().is_none().then_some(c)
}

/// FNV-1a, 64 bit; stable across platforms and releases.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Corrupt every document of a corpus, keeping ids, labels and class
/// names. Returns the corrupted corpus and the pooled accuracy stats.
pub fn corrupt_corpus(corpus: &LabeledCorpus, noise: &NoiseModel) -> (LabeledCorpus, NoiseStats) {
    let mut stats = NoiseStats::default();
    let corrupted = corpus.map_texts(|text| {
        let (out, s) = noise.corrupt_with_stats(text);
        stats.absorb(s);
        out
    });
    (corrupted, stats)
}
