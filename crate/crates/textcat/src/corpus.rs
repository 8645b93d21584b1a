//! Corpus ingestion and word-form collection.
//!
//! A *word form* is a character string between blanks with punctuation
//! characters removed. The tokenizer lowercases forms so that
//! sentence-initial variants merge, and keeps forms containing digits
//! (they are filtered later by the minimal-form rule). Word forms with
//! recognition or segmentation errors are collected like any other form;
//! adapting to them is the job of downstream learning.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Punctuation characters removed from tokens. Hyphens and dashes are
/// deleted in place, not used as split points: "halbleiter-technik"
/// becomes one form.
pub const PUNCTUATION: &[char] = &[
    '.', ',', ';', ':', '!', '?', '"', '\'', '(', ')', '[', ']', '{', '}', '/', '\\', '-', '–', '—',
];

/// Whitespace used for token boundaries: space, tab, newline, carriage
/// return.
pub const BLANKS: &[char] = &[' ', '\t', '\n', '\r'];

#[derive(Debug, Clone)]
pub struct Document {
    pub id: String,
    pub text: String,
    /// Index into the corpus class-name list.
    pub label: usize,
}

/// A labeled training or test corpus: N documents over K classes.
#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    documents: Vec<Document>,
    class_names: Vec<String>,
}

impl LabeledCorpus {
    /// Validates that the corpus is non-empty, labels are in range and
    /// document ids are unique.
    pub fn new(documents: Vec<Document>, class_names: Vec<String>) -> Result<Self> {
        if class_names.is_empty() || documents.is_empty() {
            return Err(Error::input(
                "empty corpus: need at least one labeled document",
            ));
        }
        let mut seen = BTreeSet::new();
        for doc in &documents {
            if doc.label >= class_names.len() {
                return Err(Error::input(format!(
                    "document '{}' has label index {} but corpus has {} classes",
                    doc.id,
                    doc.label,
                    class_names.len()
                )));
            }
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::input(format!("duplicate document id '{}'", doc.id)));
            }
        }
        Ok(LabeledCorpus {
            documents,
            class_names,
        })
    }

    /// Load a corpus from either a directory tree `root/<class>/<doc>.txt`
    /// or a manifest file of `path<TAB>class` lines (`#` comments and blank
    /// lines ignored, paths resolved relative to the manifest).
    pub fn load(path: &Path) -> Result<Self> {
        if path.is_dir() {
            Self::load_dir(path)
        } else if path.is_file() {
            Self::load_manifest(path)
        } else {
            Err(Error::input(format!(
                "corpus path not found: {}",
                path.display()
            )))
        }
    }

    fn load_dir(root: &Path) -> Result<Self> {
        let mut class_dirs: Vec<PathBuf> = Vec::new();
        for entry in read_dir_sorted(root)? {
            if entry.is_dir() {
                class_dirs.push(entry);
            }
        }
        let mut class_names = Vec::new();
        let mut documents = Vec::new();
        for dir in &class_dirs {
            let class_name = dir
                .file_name()
                .and_then(|n| n.to_str())
                .ok_or_else(|| {
                    Error::input(format!("non-UTF-8 class directory {}", dir.display()))
                })?
                .to_string();
            let label = class_names.len();
            let mut any = false;
            for file in read_dir_sorted(dir)? {
                if !file.is_file() || file.extension().and_then(|e| e.to_str()) != Some("txt") {
                    continue;
                }
                let text = read_text(&file)?;
                let id = format!(
                    "{}/{}",
                    class_name,
                    file.file_name().and_then(|n| n.to_str()).unwrap_or("?")
                );
                documents.push(Document { id, text, label });
                any = true;
            }
            if any {
                class_names.push(class_name);
            }
        }
        Self::new(documents, class_names)
    }

    fn load_manifest(manifest: &Path) -> Result<Self> {
        let base = manifest.parent().unwrap_or_else(|| Path::new("."));
        let content = read_text(manifest)?;
        let mut class_names: Vec<String> = Vec::new();
        let mut documents = Vec::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (rel, class) = line.split_once('\t').ok_or_else(|| {
                Error::input(format!(
                    "{}:{}: expected 'path<TAB>class'",
                    manifest.display(),
                    lineno + 1
                ))
            })?;
            let class = class.trim();
            if class.is_empty() {
                return Err(Error::input(format!(
                    "{}:{}: empty class name",
                    manifest.display(),
                    lineno + 1
                )));
            }
            let label = match class_names.iter().position(|c| c == class) {
                Some(i) => i,
                None => {
                    class_names.push(class.to_string());
                    class_names.len() - 1
                }
            };
            let file = base.join(rel);
            let text = read_text(&file)?;
            documents.push(Document {
                id: rel.to_string(),
                text,
                label,
            });
        }
        Self::new(documents, class_names)
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Replace every document text, keeping ids, labels and class names.
    pub fn map_texts(&self, mut f: impl FnMut(&str) -> String) -> LabeledCorpus {
        LabeledCorpus {
            documents: self
                .documents
                .iter()
                .map(|d| Document {
                    id: d.id.clone(),
                    text: f(&d.text),
                    label: d.label,
                })
                .collect(),
            class_names: self.class_names.clone(),
        }
    }
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<PathBuf>> {
    let rd = fs::read_dir(dir)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", dir.display())))?;
    let mut entries: Vec<PathBuf> = Vec::new();
    for entry in rd {
        let entry =
            entry.map_err(|e| Error::input(format!("cannot read {}: {e}", dir.display())))?;
        entries.push(entry.path());
    }
    entries.sort();
    Ok(entries)
}

fn read_text(path: &Path) -> Result<String> {
    let bytes =
        fs::read(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    String::from_utf8(bytes)
        .map_err(|_| Error::input(format!("{} is not valid UTF-8", path.display())))
}

/// Split a text into lowercase word forms: whitespace-delimited strings
/// with punctuation characters removed in place. Empty results are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(BLANKS)
        .filter_map(|raw| {
            let cleaned: String = raw
                .chars()
                .filter(|c| !PUNCTUATION.contains(c))
                .collect::<String>()
                .to_lowercase();
            if cleaned.is_empty() {
                None
            } else {
                Some(cleaned)
            }
        })
        .collect()
}

/// Word forms of a corpus with their total occurrence counts. This is the
/// mutable substrate that dictionary learning reduces step by step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordFormList {
    entries: BTreeMap<String, u64>,
}

impl WordFormList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add `count` occurrences of `form` (no-op for a zero count).
    pub fn add(&mut self, form: &str, count: u64) {
        if count == 0 {
            return;
        }
        match self.entries.entry(form.to_string()) {
            Entry::Occupied(mut e) => *e.get_mut() += count,
            Entry::Vacant(e) => {
                e.insert(count);
            }
        }
    }

    pub fn remove(&mut self, form: &str) -> Option<u64> {
        self.entries.remove(form)
    }

    pub fn frequency(&self, form: &str) -> u64 {
        self.entries.get(form).copied().unwrap_or(0)
    }

    pub fn contains(&self, form: &str) -> bool {
        self.entries.contains_key(form)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterate in lexicographic form order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Total token count represented by the list.
    pub fn total_mass(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Total character count over distinct forms; bounds the number of
    /// split events the iterative splitting procedure can perform.
    pub fn total_chars(&self) -> usize {
        self.entries.keys().map(|f| f.chars().count()).sum()
    }

    /// Serialize as `form<TAB>frequency` lines, sorted by descending
    /// frequency, ties lexicographic.
    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<(&str, u64)> = self.iter().collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let mut out = String::new();
        for (form, freq) in rows {
            out.push_str(form);
            out.push('\t');
            out.push_str(&freq.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut list = WordFormList::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (form, freq) = line.split_once('\t').ok_or_else(|| {
                Error::input(format!(
                    "line {}: expected 'form<TAB>frequency'",
                    lineno + 1
                ))
            })?;
            let freq: u64 = freq.parse().map_err(|_| {
                Error::input(format!("line {}: bad frequency '{freq}'", lineno + 1))
            })?;
            if freq == 0 {
                return Err(Error::input(format!("line {}: zero frequency", lineno + 1)));
            }
            list.add(form, freq);
        }
        Ok(list)
    }
}

impl FromIterator<(String, u64)> for WordFormList {
    fn from_iter<I: IntoIterator<Item = (String, u64)>>(iter: I) -> Self {
        let mut list = WordFormList::new();
        for (form, freq) in iter {
            list.add(&form, freq);
        }
        list
    }
}

/// Collect all word forms of the corpus together with their frequencies.
pub fn build_wordform_list(corpus: &LabeledCorpus) -> WordFormList {
    let mut list = WordFormList::new();
    for doc in corpus.documents() {
        for token in tokenize(&doc.text) {
            list.add(&token, 1);
        }
    }
    list
}
