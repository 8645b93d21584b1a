//! `key = value` configuration files and the effective pipeline
//! configuration.
//!
//! List values are comma-separated; `#` starts a comment. A `language`
//! key loads a shipped linguistic profile first, after which explicit
//! keys override individual fields regardless of their position in the
//! file. Unknown keys are rejected.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lexlearn::{FeatureKind, LearnConfig, LinguisticParams, StopThreshold};
use crate::polyclassify::PolyOrder;
use crate::reduce::ReductionMethod;
use crate::vectorize::{MatchPolicy, Weighting};

/// Everything a training run needs besides the corpus itself.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub learn: LearnConfig,
    pub feature_kind: FeatureKind,
    /// Dictionary size for the tri-gram baseline.
    pub trigram_count: usize,
    pub weighting: Weighting,
    pub match_policy: MatchPolicy,
    pub l_prime: usize,
    pub method: ReductionMethod,
    pub order: PolyOrder,
    /// `None` lets the classifier pick its default ridge.
    pub ridge: Option<f64>,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            learn: LearnConfig::german(),
            feature_kind: FeatureKind::Learned,
            trigram_count: 2500,
            weighting: Weighting::Binary,
            match_policy: MatchPolicy::Longest,
            l_prime: 50,
            method: ReductionMethod::Pca,
            order: PolyOrder::Linear,
            ridge: None,
            seed: 0,
        }
    }
}

/// Split a config text into (key, value) pairs, dropping comments and
/// blank lines.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {}: expected 'key = value'", lineno + 1)))?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn parse_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_char_set(key: &str, value: &str) -> Result<BTreeSet<char>> {
    let mut set = BTreeSet::new();
    for item in parse_list(value) {
        let mut chars = item.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                set.insert(c);
            }
            _ => {
                return Err(Error::config(format!(
                    "{key}: '{item}' is not a single character"
                )));
            }
        }
    }
    Ok(set)
}

fn parse_string_set(value: &str) -> BTreeSet<String> {
    parse_list(value).map(String::from).collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("{key}: cannot parse '{value}'")))
}

impl PipelineConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_config(&text)
    }

    pub fn from_str_config(text: &str) -> Result<Self> {
        let pairs = parse_kv(text)?;
        let mut config = PipelineConfig::default();
        // The language profile applies first so later keys can override
        // parts of it.
        for (key, value) in &pairs {
            if key == "language" {
                config.learn.params = match value.as_str() {
                    "german" => LinguisticParams::german(),
                    "english" => LinguisticParams::english(),
                    other => {
                        return Err(Error::config(format!(
                            "unknown language profile '{other}' (expected german|english)"
                        )));
                    }
                };
            }
        }
        for (key, value) in &pairs {
            config.apply_key(key, value)?;
        }
        config.validate()?;
        Ok(config)
    }

    fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "language" => {} // handled in the first pass
            "vowels" => self.learn.params.vowels = parse_char_set(key, value)?,
            "clusters" => self.learn.params.consonant_clusters = parse_string_set(value),
            "min_chars" => self.learn.params.min_chars = parse_num(key, value)?,
            "formative" => self.learn.params.formative_elements = parse_string_set(value),
            "max_affix_len" => self.learn.params.max_affix_len = parse_num(key, value)?,
            "stop_threshold" => {
                self.learn.stop_threshold = StopThreshold::Absolute(parse_num(key, value)?)
            }
            "stop_relative" => {
                self.learn.stop_threshold = StopThreshold::Relative(parse_num(key, value)?)
            }
            "affix_threshold" => self.learn.affix_threshold = parse_num(key, value)?,
            "feature_threshold" => self.learn.feature_threshold = parse_num(key, value)?,
            "manual_prefixes" => self.learn.manual_prefixes = parse_string_set(value),
            "manual_suffixes" => self.learn.manual_suffixes = parse_string_set(value),
            "exclude_affixes" => self.learn.exclude_affixes = parse_string_set(value),
            "features" => self.feature_kind = value.parse()?,
            "trigram_count" => self.trigram_count = parse_num(key, value)?,
            "weighting" => self.weighting = value.parse()?,
            "match" => self.match_policy = value.parse()?,
            "l_prime" => self.l_prime = parse_num(key, value)?,
            "method" => self.method = value.parse()?,
            "order" => self.order = value.parse()?,
            "ridge" => {
                self.ridge = if value == "auto" {
                    None
                } else {
                    Some(parse_num(key, value)?)
                }
            }
            "seed" => self.seed = parse_num(key, value)?,
            other => return Err(Error::config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.learn.validate()?;
        if self.l_prime < 1 {
            return Err(Error::config("l_prime must be at least 1"));
        }
        if self.trigram_count < 1 {
            return Err(Error::config("trigram_count must be at least 1"));
        }
        if let Some(r) = self.ridge {
            if r.is_nan() || r < 0.0 {
                return Err(Error::config("ridge must be non-negative"));
            }
        }
        Ok(())
    }

    /// Canonical `key = value` rendering; parsing it back yields an equal
    /// configuration, which is how model bundles snapshot their settings.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let join_chars = |set: &BTreeSet<char>| {
            set.iter()
                .map(char::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        let join_strs = |set: &BTreeSet<String>| set.iter().cloned().collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "vowels = {}", join_chars(&self.learn.params.vowels));
        let _ = writeln!(
            out,
            "clusters = {}",
            join_strs(&self.learn.params.consonant_clusters)
        );
        let _ = writeln!(out, "min_chars = {}", self.learn.params.min_chars);
        let _ = writeln!(
            out,
            "formative = {}",
            join_strs(&self.learn.params.formative_elements)
        );
        let _ = writeln!(out, "max_affix_len = {}", self.learn.params.max_affix_len);
        match self.learn.stop_threshold {
            StopThreshold::Absolute(t) => {
                let _ = writeln!(out, "stop_threshold = {t}");
            }
            StopThreshold::Relative(r) => {
                let _ = writeln!(out, "stop_relative = {r}");
            }
        }
        let _ = writeln!(out, "affix_threshold = {}", self.learn.affix_threshold);
        let _ = writeln!(out, "feature_threshold = {}", self.learn.feature_threshold);
        let _ = writeln!(
            out,
            "manual_prefixes = {}",
            join_strs(&self.learn.manual_prefixes)
        );
        let _ = writeln!(
            out,
            "manual_suffixes = {}",
            join_strs(&self.learn.manual_suffixes)
        );
        let _ = writeln!(
            out,
            "exclude_affixes = {}",
            join_strs(&self.learn.exclude_affixes)
        );
        let _ = writeln!(out, "features = {}", self.feature_kind.as_str());
        let _ = writeln!(out, "trigram_count = {}", self.trigram_count);
        let _ = writeln!(out, "weighting = {}", self.weighting.as_str());
        let _ = writeln!(out, "match = {}", self.match_policy.as_str());
        let _ = writeln!(out, "l_prime = {}", self.l_prime);
        let _ = writeln!(out, "method = {}", self.method.as_str());
        let _ = writeln!(out, "order = {}", self.order.as_u8());
        match self.ridge {
            None => {
                let _ = writeln!(out, "ridge = auto");
            }
            Some(r) => {
                let _ = writeln!(out, "ridge = {r:e}");
            }
        }
        let _ = writeln!(out, "seed = {}", self.seed);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(PipelineConfig::default().validate().is_ok());
    }

    #[test]
    fn parse_full_config() {
        let text = "\
# demo configuration
language = german
stop_threshold = 80
affix_threshold = 40
feature_threshold = 4
l_prime = 8          # keep it small
features = learned
weighting = binary
match = longest
method = pca
order = 1
ridge = auto
seed = 42
manual_suffixes = verfahren, technik
";
        let config = PipelineConfig::from_str_config(text).unwrap();
        assert_eq!(config.l_prime, 8);
        assert_eq!(config.seed, 42);
        assert_eq!(config.learn.stop_threshold, StopThreshold::Absolute(80));
        assert!(config.learn.manual_suffixes.contains("verfahren"));
        assert!(config.learn.manual_suffixes.contains("technik"));
        assert_eq!(config.ridge, None);
    }

    #[test]
    fn language_profile_applies_before_overrides() {
        let text = "vowels = a,e,i\nlanguage = german\nmin_chars = 4\n";
        let config = PipelineConfig::from_str_config(text).unwrap();
        // Explicit vowels win even though the language key comes later.
        assert_eq!(config.learn.params.vowels.len(), 3);
        assert_eq!(config.learn.params.min_chars, 4);
        assert!(!config.learn.params.consonant_clusters.is_empty());
    }

    #[test]
    fn unknown_key_is_config_error() {
        let err = PipelineConfig::from_str_config("sto_threshold = 3\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("sto_threshold"));
    }

    #[test]
    fn bad_values_are_config_errors() {
        assert!(PipelineConfig::from_str_config("l_prime = many\n").is_err());
        assert!(PipelineConfig::from_str_config("vowels = ab\n").is_err());
        assert!(PipelineConfig::from_str_config("order = 3\n").is_err());
        assert!(PipelineConfig::from_str_config("features = magic\n").is_err());
        assert!(PipelineConfig::from_str_config("feature_threshold = 2\n").is_err());
        assert!(PipelineConfig::from_str_config("just a line\n").is_err());
    }

    #[test]
    fn render_parse_roundtrip() {
        let mut config = PipelineConfig {
            l_prime: 123,
            seed: 7,
            ridge: Some(1e-6),
            weighting: Weighting::InverseDocumentFrequency,
            ..PipelineConfig::default()
        };
        config.learn.stop_threshold = StopThreshold::Relative(0.02);
        config.learn.manual_suffixes.insert("verfahren".into());
        let back = PipelineConfig::from_str_config(&config.render()).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn relative_threshold_key() {
        let config = PipelineConfig::from_str_config("stop_relative = 0.05\n").unwrap();
        assert_eq!(config.learn.stop_threshold, StopThreshold::Relative(0.05));
    }

    #[test]
    fn match_policy_keys() {
        let config = PipelineConfig::from_str_config("match = all\n").unwrap();
        assert_eq!(config.match_policy, MatchPolicy::All);
        assert!(PipelineConfig::from_str_config("match = longest-ish\n").is_err());
    }
}
