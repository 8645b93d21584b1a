//! Deterministic synthetic corpus generator.
//!
//! Real evaluation corpora are rarely redistributable, so tests and demos
//! run on generated ones: each class gets a planted vocabulary of
//! pronounceable synthetic stems, documents mix class words with shared
//! domain words and high-frequency function words, and a share of the
//! class tokens appears as two-stem compounds (optionally joined by a
//! formative "s") or with derivational endings. Everything is drawn from
//! one seeded generator, so a spec value produces byte-identical corpora
//! on every run and platform.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const CONSONANTS: &[char] = &[
    'b', 'd', 'f', 'g', 'k', 'l', 'm', 'n', 'p', 'r', 's', 't', 'w', 'z',
];
const VOWELS: &[char] = &['a', 'e', 'i', 'o', 'u'];

/// Function words shared by every document; their corpus frequency is high
/// enough that a sensible threshold turns them into stop words.
const FUNCTION_WORDS: &[&str] = &[
    "die", "der", "und", "das", "ist", "mit", "von", "ein", "auf", "bei",
];

const ENDINGS: &[&str] = &["ung", "en", "er"];

#[derive(Debug, Clone)]
pub struct FixtureSpec {
    pub seed: u64,
    pub class_names: Vec<String>,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub vocab_per_class: usize,
    pub shared_vocab: usize,
    pub tokens_per_doc: usize,
    /// Share of class-word draws emitted as two-stem compounds.
    pub compound_fraction: f64,
    /// Share of compounds joined with a formative "s".
    pub formative_fraction: f64,
    /// Share of class-word draws decorated with a derivational ending.
    pub ending_fraction: f64,
    /// Share of tokens drawn from the function-word inventory.
    pub function_fraction: f64,
    /// Share of tokens drawn from the shared domain vocabulary.
    pub shared_fraction: f64,
    /// How many function words to use; fewer words concentrate the
    /// function-word mass, keeping them frequency-separable from the
    /// planted stems even in tiny corpora.
    pub function_inventory: usize,
    /// Share of class-word draws taken from a random other class; makes
    /// classes overlap so error rates stay away from zero.
    pub confusion_fraction: f64,
}

impl FixtureSpec {
    fn three_classes() -> Vec<String> {
        vec!["alpha".into(), "beta".into(), "gamma".into()]
    }

    /// Three classes, 300 training and 90 test documents.
    pub fn standard(seed: u64) -> Self {
        FixtureSpec {
            seed,
            class_names: Self::three_classes(),
            train_per_class: 100,
            test_per_class: 30,
            vocab_per_class: 40,
            shared_vocab: 25,
            tokens_per_doc: 60,
            compound_fraction: 0.10,
            formative_fraction: 0.30,
            ending_fraction: 0.12,
            function_fraction: 0.18,
            shared_fraction: 0.12,
            function_inventory: FUNCTION_WORDS.len(),
            confusion_fraction: 0.0,
        }
    }

    /// Small committed corpus for fast tests and demos.
    pub fn mini(seed: u64) -> Self {
        FixtureSpec {
            seed,
            class_names: Self::three_classes(),
            train_per_class: 8,
            test_per_class: 4,
            vocab_per_class: 12,
            shared_vocab: 8,
            tokens_per_doc: 40,
            compound_fraction: 0.10,
            formative_fraction: 0.30,
            ending_fraction: 0.12,
            function_fraction: 0.18,
            shared_fraction: 0.12,
            function_inventory: 4,
            confusion_fraction: 0.0,
        }
    }

    /// Large enough for 500-dimensional reduced spaces: over 500 training
    /// documents and over 500 learnable features.
    pub fn sweep(seed: u64) -> Self {
        FixtureSpec {
            seed,
            class_names: Self::three_classes(),
            train_per_class: 170,
            test_per_class: 30,
            vocab_per_class: 170,
            shared_vocab: 40,
            tokens_per_doc: 20,
            compound_fraction: 0.08,
            formative_fraction: 0.30,
            ending_fraction: 0.10,
            function_fraction: 0.18,
            shared_fraction: 0.12,
            function_inventory: FUNCTION_WORDS.len(),
            confusion_fraction: 0.35,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.class_names.is_empty() || self.train_per_class == 0 {
            return Err(Error::config(
                "fixture needs classes and training documents",
            ));
        }
        if self.vocab_per_class == 0 || self.tokens_per_doc == 0 {
            return Err(Error::config(
                "fixture needs vocabulary and document length",
            ));
        }
        for p in [
            self.compound_fraction,
            self.formative_fraction,
            self.ending_fraction,
            self.function_fraction,
            self.shared_fraction,
            self.confusion_fraction,
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config("fixture fractions must lie in [0,1]"));
            }
        }
        if self.function_fraction + self.shared_fraction >= 1.0 {
            return Err(Error::config(
                "function and shared fractions leave no room for class words",
            ));
        }
        if self.function_inventory < 1 || self.function_inventory > FUNCTION_WORDS.len() {
            return Err(Error::config(format!(
                "function_inventory must lie in 1..={}",
                FUNCTION_WORDS.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FixturePaths {
    pub root: PathBuf,
    pub train: PathBuf,
    pub test: PathBuf,
}

/// Write a synthetic corpus under `root/train/<class>/*.txt` and
/// `root/test/<class>/*.txt`.
pub fn generate(root: &Path, spec: &FixtureSpec) -> Result<FixturePaths> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let function_words = &FUNCTION_WORDS[..spec.function_inventory];

    let mut taken: BTreeSet<String> = FUNCTION_WORDS.iter().map(|w| w.to_string()).collect();
    let class_vocabs: Vec<Vec<String>> = spec
        .class_names
        .iter()
        .map(|_| draw_vocab(&mut rng, spec.vocab_per_class, &mut taken))
        .collect();
    let shared_vocab = draw_vocab(&mut rng, spec.shared_vocab, &mut taken);

    let train = root.join("train");
    let test = root.join("test");
    for (split, per_class) in [(&train, spec.train_per_class), (&test, spec.test_per_class)] {
        for (class_idx, class) in spec.class_names.iter().enumerate() {
            let dir = split.join(class);
            fs::create_dir_all(&dir)
                .map_err(|e| Error::input(format!("cannot create {}: {e}", dir.display())))?;
            for doc in 0..per_class {
                let text = synth_document(
                    &mut rng,
                    spec,
                    function_words,
                    &class_vocabs,
                    class_idx,
                    &shared_vocab,
                );
                let path = dir.join(format!("doc_{doc:03}.txt"));
                fs::write(&path, text)
                    .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
            }
        }
    }
    Ok(FixturePaths {
        root: root.to_path_buf(),
        train,
        test,
    })
}

/// Distinct stems with no substring relation to any previously drawn word,
/// so class vocabularies never leak into each other through matching or
/// splitting.
fn draw_vocab(rng: &mut ChaCha8Rng, count: usize, taken: &mut BTreeSet<String>) -> Vec<String> {
    let mut vocab = Vec::with_capacity(count);
    while vocab.len() < count {
        let word = synth_stem(rng);
        let clashes = taken
            .iter()
            .any(|t| t.contains(word.as_str()) || word.contains(t.as_str()));
        if !clashes {
            taken.insert(word.clone());
            vocab.push(word);
        }
    }
    vocab
}

/// Pronounceable CV-syllable stem, 2-4 syllables.
fn synth_stem(rng: &mut ChaCha8Rng) -> String {
    let syllables = rng.gen_range(2..=4);
    let mut word = String::with_capacity(syllables * 2);
    for _ in 0..syllables {
        word.push(*CONSONANTS.choose(rng).expect("non-empty"));
        word.push(*VOWELS.choose(rng).expect("non-empty"));
    }
    word
}

fn synth_document(
    rng: &mut ChaCha8Rng,
    spec: &FixtureSpec,
    function_words: &[&str],
    class_vocabs: &[Vec<String>],
    class_idx: usize,
    shared_vocab: &[String],
) -> String {
    let mut tokens = Vec::with_capacity(spec.tokens_per_doc);
    for _ in 0..spec.tokens_per_doc {
        let r: f64 = rng.gen();
        let token = if r < spec.function_fraction {
            function_words.choose(rng).expect("non-empty").to_string()
        } else if r < spec.function_fraction + spec.shared_fraction && !shared_vocab.is_empty() {
            shared_vocab.choose(rng).expect("non-empty").clone()
        } else {
            // Class overlap: some draws come from another class's
            // vocabulary.
            let class_vocab =
                if class_vocabs.len() > 1 && rng.gen::<f64>() < spec.confusion_fraction {
                    let mut other = rng.gen_range(0..class_vocabs.len());
                    while other == class_idx {
                        other = rng.gen_range(0..class_vocabs.len());
                    }
                    &class_vocabs[other]
                } else {
                    &class_vocabs[class_idx]
                };
            let base = class_vocab.choose(rng).expect("non-empty").clone();
            let style: f64 = rng.gen();
            if style < spec.compound_fraction && class_vocab.len() > 1 {
                let mut second = class_vocab.choose(rng).expect("non-empty");
                while second == &base {
                    second = class_vocab.choose(rng).expect("non-empty");
                }
                let joiner = if rng.gen::<f64>() < spec.formative_fraction {
                    "s"
                } else {
                    ""
                };
                format!("{base}{joiner}{second}")
            } else if style < spec.compound_fraction + spec.ending_fraction {
                format!("{base}{}", ENDINGS.choose(rng).expect("non-empty"))
            } else {
                base
            }
        };
        tokens.push(token);
    }

    // Assemble into sentences with light punctuation and line breaks; the
    // tokenizer has to undo all of it.
    let mut out = String::new();
    let mut sentence_pos = 0;
    let mut sentence_len = rng.gen_range(8..=14);
    for (i, token) in tokens.iter().enumerate() {
        if sentence_pos == 0 {
            let mut chars = token.chars();
            if let Some(first) = chars.next() {
                out.push(first.to_ascii_uppercase());
                out.push_str(chars.as_str());
            }
        } else {
            out.push_str(token);
        }
        sentence_pos += 1;
        let last = i + 1 == tokens.len();
        if sentence_pos >= sentence_len || last {
            out.push('.');
            out.push('\n');
            sentence_pos = 0;
            sentence_len = rng.gen_range(8..=14);
        } else if rng.gen::<f64>() < 0.08 {
            out.push_str(", ");
        } else {
            out.push(' ');
        }
    }
    out
}
