//! End-to-end orchestration: training, persistence, classification,
//! evaluation and the feature-set/width sweep.
//!
//! A trained categorizer is a [`ModelBundle`]: stop words, feature
//! dictionary, projection and classifier plus the configuration snapshot
//! that produced them. Bundles serialize as a sectioned UTF-8 text file
//! with floats at 17 significant digits, so save → load → save is
//! byte-identical and every reported number is reproducible from
//! (corpus bytes, config, seed).

use std::fmt::Write as _;
use std::path::Path;

use crate::config::PipelineConfig;
use crate::corpus::{build_wordform_list, LabeledCorpus};
use crate::error::{Error, Result};
use crate::lexlearn::{
    find_stop_words, learn_dictionaries, FeatureDictionary, FeatureEntry, FeatureKind, LearnReport,
    StopWordDictionary,
};
use crate::linalg::Mat;
use crate::polyclassify::{decide, expansion_dim, fit, ClassifierModel, FitOptions, PolyOrder};
use crate::reduce::{
    empirical_reconstruction_error, fit_pca, fit_pca_capped, fit_svd, fit_svd_capped,
    ProjectionModel, ReductionMethod,
};
use crate::vectorize::{
    document_frequencies, to_feature_text, to_vector, trigram_features, FeatureVector,
};

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

/// Everything needed to categorize a text, as produced by [`train`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBundle {
    pub config: PipelineConfig,
    pub class_names: Vec<String>,
    pub stop: StopWordDictionary,
    pub features: FeatureDictionary,
    pub projection: ProjectionModel,
    pub classifier: ClassifierModel,
}

impl ModelBundle {
    /// Cross-component consistency: dictionary length feeds the
    /// projection, the projection width feeds the classifier, and the
    /// classifier speaks for every class.
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        self.projection.validate()?;
        if self.features.len() != self.projection.input_dim() {
            return Err(Error::input(format!(
                "dictionary has {} features but the projection expects {}",
                self.features.len(),
                self.projection.input_dim()
            )));
        }
        if self.projection.output_dim() != self.classifier.input_dim() {
            return Err(Error::input(format!(
                "projection width {} does not match classifier width {}",
                self.projection.output_dim(),
                self.classifier.input_dim()
            )));
        }
        if self.classifier.class_count() != self.class_names.len() {
            return Err(Error::input(format!(
                "classifier has {} outputs for {} classes",
                self.classifier.class_count(),
                self.class_names.len()
            )));
        }
        if self.features.kind() != self.config.feature_kind {
            return Err(Error::input(
                "dictionary kind disagrees with the config snapshot".to_string(),
            ));
        }
        Ok(())
    }

    /// Feature vector of a text under this bundle's dictionaries and
    /// weighting.
    pub fn vectorize(&self, text: &str) -> Result<FeatureVector> {
        let ft = to_feature_text(text, &self.stop, &self.features, self.config.match_policy);
        to_vector(&ft, &self.features, self.config.weighting)
    }

    /// Map a text to its category: vectorize, project, score, decide.
    /// Total on any input; an empty or all-stop-word text is still
    /// assigned the class its zero vector scores highest.
    pub fn classify(&self, text: &str) -> Result<(String, Vec<f64>)> {
        let v = self.vectorize(text)?;
        let reduced = self.projection.project(&v.values)?;
        let scores = self.classifier.predict(&reduced)?;
        let idx = decide(&scores)?;
        Ok((self.class_names[idx].clone(), scores))
    }

    /// Header facts plus the reconstruction-error curve from the stored
    /// spectrum.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "format          {BUNDLE_FORMAT_VERSION}");
        let _ = writeln!(out, "classes         {}", self.class_names.join(", "));
        let _ = writeln!(out, "stop words      {}", self.stop.len());
        let _ = writeln!(
            out,
            "features        {} ({})",
            self.features.len(),
            self.features.kind().as_str()
        );
        let _ = writeln!(
            out,
            "projection      {} L={} L'={}",
            self.projection.method().as_str(),
            self.projection.input_dim(),
            self.projection.output_dim()
        );
        let _ = writeln!(
            out,
            "classifier      order {} X={} K={}",
            self.classifier.order().as_u8(),
            self.classifier.expansion_len(),
            self.classifier.class_count()
        );
        let _ = writeln!(out, "reconstruction error by width:");
        for (lp, err) in self.reconstruction_curve() {
            let _ = writeln!(out, "  L'={lp:<5} {err:5.1}%");
        }
        out
    }

    /// Error curve at the canonical widths plus the fitted one.
    pub fn reconstruction_curve(&self) -> Vec<(usize, f64)> {
        let spectrum = self.projection.eigenvalues().len();
        let mut widths: Vec<usize> = [50, 100, 200, 500]
            .into_iter()
            .filter(|&w| w <= spectrum)
            .collect();
        widths.push(self.projection.output_dim());
        widths.sort_unstable();
        widths.dedup();
        self.projection.error_curve(&widths).unwrap_or_default()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    /// Sectioned text serialization. Floats carry 17 significant digits,
    /// enough to reproduce every f64 bit-for-bit on reload.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[header]");
        let _ = writeln!(out, "format = {BUNDLE_FORMAT_VERSION}");
        let _ = writeln!(out, "classes = {}", self.class_names.len());
        for name in &self.class_names {
            let _ = writeln!(out, "class = {name}");
        }

        let _ = writeln!(out, "[config]");
        out.push_str(&self.config.render());

        let _ = writeln!(out, "[stopwords]");
        let _ = writeln!(out, "count = {}", self.stop.len());
        let _ = writeln!(out, "threshold = {}", self.stop.threshold_used());
        out.push_str(&self.stop.to_lines());

        let _ = writeln!(out, "[features]");
        let _ = writeln!(out, "count = {}", self.features.len());
        let _ = writeln!(out, "docs = {}", self.features.n_docs());
        for (i, e) in self.features.entries().iter().enumerate() {
            let _ = writeln!(out, "{i}\t{}\t{}\t{}", e.text, e.frequency, e.doc_frequency);
        }

        let _ = writeln!(out, "[projection]");
        let _ = writeln!(out, "method = {}", self.projection.method().as_str());
        let _ = writeln!(out, "l = {}", self.projection.input_dim());
        let _ = writeln!(out, "l_prime = {}", self.projection.output_dim());
        let _ = writeln!(out, "spectrum = {}", self.projection.eigenvalues().len());
        let _ = writeln!(out, "mean = {}", floats_line(self.projection.mean()));
        let _ = writeln!(
            out,
            "eigenvalues = {}",
            floats_line(self.projection.eigenvalues())
        );
        for i in 0..self.projection.input_dim() {
            let _ = writeln!(out, "{}", floats_line(self.projection.basis().row(i)));
        }

        let _ = writeln!(out, "[classifier]");
        let _ = writeln!(out, "order = {}", self.classifier.order().as_u8());
        let _ = writeln!(out, "k = {}", self.classifier.class_count());
        let _ = writeln!(out, "l_prime = {}", self.classifier.input_dim());
        let _ = writeln!(out, "x = {}", self.classifier.expansion_len());
        for i in 0..self.classifier.expansion_len() {
            let _ = writeln!(
                out,
                "{}",
                floats_line(self.classifier.coefficients().row(i))
            );
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut r = Reader::new(text);

        r.section("header")?;
        let format: u32 = r.kv_parse("format")?;
        if format != BUNDLE_FORMAT_VERSION {
            return Err(Error::input(format!(
                "header: unsupported format version {format} (expected {BUNDLE_FORMAT_VERSION})"
            )));
        }
        let class_count: usize = r.kv_parse("classes")?;
        let mut class_names = Vec::with_capacity(class_count);
        for _ in 0..class_count {
            class_names.push(r.kv("class")?.to_string());
        }

        r.section("config")?;
        let mut config_text = String::new();
        while let Some(line) = r.peek() {
            if line.starts_with('[') {
                break;
            }
            config_text.push_str(r.line()?);
            config_text.push('\n');
        }
        let config = PipelineConfig::from_str_config(&config_text)
            .map_err(|e| Error::input(format!("model file [config]: {e}")))?;

        r.section("stopwords")?;
        let stop_count: usize = r.kv_parse("count")?;
        let stop_threshold: u64 = r.kv_parse("threshold")?;
        let mut stop_lines = String::new();
        for _ in 0..stop_count {
            stop_lines.push_str(r.line()?);
            stop_lines.push('\n');
        }
        let stop = StopWordDictionary::from_lines(&stop_lines, stop_threshold);
        if stop.len() != stop_count {
            return Err(Error::input(format!(
                "stopwords: {} distinct words for a declared count of {stop_count}",
                stop.len()
            )));
        }

        r.section("features")?;
        let feat_count: usize = r.kv_parse("count")?;
        let docs: u64 = r.kv_parse("docs")?;
        let mut entries = Vec::with_capacity(feat_count);
        for i in 0..feat_count {
            let line = r.line()?;
            let mut cols = line.split('\t');
            let idx: usize = cols
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| r.err("features", "bad index column"))?;
            if idx != i {
                return Err(r.err("features", &format!("index {idx} out of order")));
            }
            let text = cols
                .next()
                .ok_or_else(|| r.err("features", "missing feature column"))?;
            let frequency: u64 = cols
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| r.err("features", "bad frequency column"))?;
            let doc_frequency: u64 = cols
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| r.err("features", "bad document-frequency column"))?;
            entries.push(FeatureEntry {
                text: text.to_string(),
                frequency,
                doc_frequency,
            });
        }
        let features = FeatureDictionary::from_entries(config.feature_kind, entries, docs);

        r.section("projection")?;
        let method: ReductionMethod = r
            .kv("method")?
            .parse()
            .map_err(|e| Error::input(format!("model file [projection]: {e}")))?;
        let l: usize = r.kv_parse("l")?;
        let l_prime: usize = r.kv_parse("l_prime")?;
        let spectrum: usize = r.kv_parse("spectrum")?;
        let mean = parse_floats(r.kv("mean")?, l).map_err(|m| r.err("projection", &m))?;
        let eigenvalues =
            parse_floats(r.kv("eigenvalues")?, spectrum).map_err(|m| r.err("projection", &m))?;
        let mut basis = Mat::zeros(l, l_prime);
        for i in 0..l {
            let row = parse_floats(r.line()?, l_prime).map_err(|m| r.err("projection", &m))?;
            for (j, x) in row.into_iter().enumerate() {
                basis[(i, j)] = x;
            }
        }
        let projection = ProjectionModel::from_parts(method, mean, basis, eigenvalues, l, l_prime)
            .map_err(|e| e.in_stage("model file [projection]"))?;

        r.section("classifier")?;
        let order: PolyOrder = r
            .kv("order")?
            .parse()
            .map_err(|e| Error::input(format!("model file [classifier]: {e}")))?;
        let k: usize = r.kv_parse("k")?;
        let cls_l_prime: usize = r.kv_parse("l_prime")?;
        let x_dim: usize = r.kv_parse("x")?;
        if k != class_names.len() {
            return Err(r.err("classifier", "class count disagrees with the header"));
        }
        if x_dim != expansion_dim(cls_l_prime, order) {
            return Err(r.err(
                "classifier",
                "expansion size disagrees with order and width",
            ));
        }
        let mut a = Mat::zeros(x_dim, k);
        for i in 0..x_dim {
            let row = parse_floats(r.line()?, k).map_err(|m| r.err("classifier", &m))?;
            for (j, x) in row.into_iter().enumerate() {
                a[(i, j)] = x;
            }
        }
        let classifier = ClassifierModel::from_parts(order, a, cls_l_prime, class_names.clone())
            .map_err(|e| e.in_stage("model file [classifier]"))?;

        let bundle = ModelBundle {
            config,
            class_names,
            stop,
            features,
            projection,
            classifier,
        };
        bundle.validate()?;
        Ok(bundle)
    }
}

fn floats_line(values: &[f64]) -> String {
    values
        .iter()
        .map(|x| format!("{x:.16e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_floats(line: &str, expected: usize) -> std::result::Result<Vec<f64>, String> {
    let values: std::result::Result<Vec<f64>, _> =
        line.split_whitespace().map(str::parse).collect();
    match values {
        Ok(v) if v.len() == expected => Ok(v),
        Ok(v) => Err(format!("expected {expected} numbers, found {}", v.len())),
        Err(_) => Err("unparseable number".to_string()),
    }
}

/// Sequential line reader with section framing; every error names the
/// section it occurred in.
struct Reader<'a> {
    lines: std::vec::IntoIter<&'a str>,
    peeked: Option<&'a str>,
    current_section: String,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
            lines: text.lines().collect::<Vec<_>>().into_iter(),
            peeked: None,
            current_section: "header".to_string(),
        }
    }

    fn err(&self, section: &str, msg: &str) -> Error {
        Error::input(format!("model file [{section}]: {msg}"))
    }

    fn peek(&mut self) -> Option<&'a str> {
        if self.peeked.is_none() {
            self.peeked = self.lines.next();
        }
        self.peeked
    }

    fn line(&mut self) -> Result<&'a str> {
        self.peek();
        self.peeked
            .take()
            .ok_or_else(|| self.err(&self.current_section.clone(), "section truncated"))
    }

    fn section(&mut self, name: &str) -> Result<()> {
        let line = self.line()?;
        if line != format!("[{name}]") {
            return Err(Error::input(format!(
                "model file: expected section [{name}], found '{line}'"
            )));
        }
        self.current_section = name.to_string();
        Ok(())
    }

    fn kv(&mut self, key: &str) -> Result<&'a str> {
        let line = self.line()?;
        let (k, v) = line.split_once('=').ok_or_else(|| {
            self.err(
                &self.current_section.clone(),
                &format!("expected '{key} = …'"),
            )
        })?;
        if k.trim() != key {
            return Err(self.err(
                &self.current_section.clone(),
                &format!("expected key '{key}', found '{}'", k.trim()),
            ));
        }
        Ok(v.trim())
    }

    fn kv_parse<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.kv(key)?;
        v.parse().map_err(|_| {
            self.err(
                &self.current_section.clone(),
                &format!("cannot parse '{v}' for key '{key}'"),
            )
        })
    }
}

/// Per-run facts reported by [`train`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub documents: usize,
    pub class_count: usize,
    pub vector_length: usize,
    pub reduced_length: usize,
    pub learn: Option<LearnReport>,
    pub reconstruction_curve: Vec<(usize, f64)>,
    pub training_error_percent: f64,
}

impl TrainReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "N = {} documents, K = {} classes, L = {}, L' = {}",
            self.documents, self.class_count, self.vector_length, self.reduced_length
        );
        if let Some(learn) = &self.learn {
            out.push_str(&learn.render());
            out.push('\n');
        }
        let _ = writeln!(out, "reconstruction error by width:");
        for (lp, err) in &self.reconstruction_curve {
            let _ = writeln!(out, "  L'={lp:<5} {err:5.1}%");
        }
        let _ = writeln!(out, "training error {:.1}%", self.training_error_percent);
        out
    }
}

/// Learn dictionaries, vectorize the corpus, fit the projection and the
/// classifier. Any stage failure is reported with its stage name.
pub fn train(
    corpus: &LabeledCorpus,
    config: &PipelineConfig,
) -> Result<(ModelBundle, TrainReport)> {
    config.validate()?;
    let (stop, mut features, learn_report) = match config.feature_kind {
        FeatureKind::Learned => {
            let (s, f, r) =
                learn_dictionaries(corpus, &config.learn).map_err(|e| e.in_stage("learn"))?;
            (s, f, Some(r))
        }
        FeatureKind::Trigram => {
            let list = build_wordform_list(corpus);
            let threshold = config.learn.effective_stop_threshold(list.total_mass());
            let s = find_stop_words(&list, threshold).map_err(|e| e.in_stage("learn"))?;
            let f = trigram_features(corpus, &s, config.trigram_count)
                .map_err(|e| e.in_stage("learn"))?;
            if f.is_empty() {
                return Err(Error::config(
                    "learn: no tri-grams extracted; the corpus is empty after stop-word removal",
                ));
            }
            (s, f, None)
        }
    };
    let (dfs, n_docs) = document_frequencies(corpus, &stop, &features, config.match_policy);
    features
        .set_document_frequencies(&dfs, n_docs)
        .map_err(|e| e.in_stage("learn"))?;

    let mut rows = Vec::with_capacity(corpus.len());
    for doc in corpus.documents() {
        let ft = to_feature_text(&doc.text, &stop, &features, config.match_policy);
        let v = to_vector(&ft, &features, config.weighting).map_err(|e| e.in_stage("vectorize"))?;
        rows.push(v.values);
    }

    let projection = match config.method {
        ReductionMethod::Pca => fit_pca(&rows, config.l_prime),
        ReductionMethod::Svd => fit_svd(&rows, config.l_prime),
    }
    .map_err(|e| e.in_stage("reduce"))?;

    // The spectral error ratio must agree with the measured residual.
    let spectral = projection
        .reconstruction_error_percent(config.l_prime)
        .map_err(|e| e.in_stage("reduce"))?;
    let empirical = empirical_reconstruction_error(&projection, &rows, config.l_prime)
        .map_err(|e| e.in_stage("reduce"))?;
    if (spectral - empirical).abs() > 1e-6 * spectral.max(empirical).max(1e-9) {
        return Err(Error::numerical(format!(
            "reduce: spectral reconstruction error {spectral} disagrees with measured {empirical}"
        )));
    }

    let mut samples = Vec::with_capacity(rows.len());
    for (row, doc) in rows.iter().zip(corpus.documents()) {
        let reduced = projection.project(row).map_err(|e| e.in_stage("reduce"))?;
        samples.push((reduced, doc.label));
    }
    let classifier = fit(
        &samples,
        corpus.class_names(),
        &FitOptions {
            order: config.order,
            ridge: config.ridge,
            allow_pseudo_inverse: true,
        },
    )
    .map_err(|e| e.in_stage("classify"))?;

    let mut training_errors = 0usize;
    for (reduced, label) in &samples {
        let scores = classifier
            .predict(reduced)
            .map_err(|e| e.in_stage("classify"))?;
        if decide(&scores)? != *label {
            training_errors += 1;
        }
    }

    let bundle = ModelBundle {
        config: config.clone(),
        class_names: corpus.class_names().to_vec(),
        stop,
        features,
        projection,
        classifier,
    };
    bundle.validate()?;
    let report = TrainReport {
        documents: corpus.len(),
        class_count: corpus.class_count(),
        vector_length: bundle.features.len(),
        reduced_length: bundle.projection.output_dim(),
        learn: learn_report,
        reconstruction_curve: bundle.reconstruction_curve(),
        training_error_percent: 100.0 * training_errors as f64 / corpus.len() as f64,
    };
    Ok((bundle, report))
}

/// Forced-recognition evaluation: exact error ratio plus a per-class
/// confusion matrix (rows = true class, columns = predicted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub class_names: Vec<String>,
    pub confusion: Vec<Vec<usize>>,
    pub total: usize,
    pub correct: usize,
}

impl EvalReport {
    pub fn error_rate_percent(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * (self.total - self.correct) as f64 / self.total as f64
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "error rate {:.1}% ({} of {} misclassified)",
            self.error_rate_percent(),
            self.total - self.correct,
            self.total
        );
        let width = self
            .class_names
            .iter()
            .map(|n| n.len())
            .max()
            .unwrap_or(0)
            .max(5);
        let _ = write!(out, "{:width$} ", "");
        for name in &self.class_names {
            let _ = write!(out, "{name:>width$} ");
        }
        out.push('\n');
        for (i, row) in self.confusion.iter().enumerate() {
            let _ = write!(out, "{:width$} ", self.class_names[i]);
            for &n in row {
                let _ = write!(out, "{n:>width$} ");
            }
            out.push('\n');
        }
        out
    }
}

/// Classify every test document against the bundle. Test labels must all
/// exist in the bundle's class set.
pub fn evaluate(bundle: &ModelBundle, test: &LabeledCorpus) -> Result<EvalReport> {
    let k = bundle.class_names.len();
    // Map test label indices into bundle class indices by name.
    let mut label_map = Vec::with_capacity(test.class_count());
    for name in test.class_names() {
        let idx = bundle
            .class_names
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| {
                Error::input(format!(
                    "test corpus labels class '{name}' which the model does not know"
                ))
            })?;
        label_map.push(idx);
    }
    let mut confusion = vec![vec![0usize; k]; k];
    let mut correct = 0usize;
    for doc in test.documents() {
        let truth = label_map[doc.label];
        let (predicted_name, _) = bundle.classify(&doc.text)?;
        let predicted = bundle
            .class_names
            .iter()
            .position(|c| c == &predicted_name)
            .expect("prediction names a bundle class");
        confusion[truth][predicted] += 1;
        if truth == predicted {
            correct += 1;
        }
    }
    Ok(EvalReport {
        class_names: bundle.class_names.clone(),
        confusion,
        total: test.len(),
        correct,
    })
}

/// One cell of a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepCell {
    ErrorPercent(f64),
    Unavailable(String),
}

/// Error rates over reduced-space widths (rows) and feature sets
/// (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<usize>,
    pub columns: Vec<String>,
    /// `cells[row][column]`
    pub cells: Vec<Vec<SweepCell>>,
}

impl SweepTable {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let label_width = "vector length".len();
        let col_width = self.columns.iter().map(String::len).max().unwrap_or(8);
        let _ = write!(out, "{:>label_width$}", "vector length");
        for col in &self.columns {
            let _ = write!(out, "  {col:>col_width$}");
        }
        out.push('\n');
        for (row, cells) in self.rows.iter().zip(&self.cells) {
            let _ = write!(out, "{row:>label_width$}");
            for cell in cells {
                match cell {
                    SweepCell::ErrorPercent(e) => {
                        let _ = write!(out, "  {:>col_width$}", format!("{e:.1}%"));
                    }
                    SweepCell::Unavailable(_) => {
                        let _ = write!(out, "  {:>col_width$}", "-");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn feature_set_label(kind: FeatureKind) -> String {
    match kind {
        FeatureKind::Trigram => "tri-gram features".to_string(),
        FeatureKind::Learned => "learned features".to_string(),
    }
}

/// Train and evaluate every (width, feature set) combination. Dictionaries
/// and the projection spectrum are fitted once per feature set; each row
/// reuses the leading basis columns. Widths beyond the data rank yield
/// unavailable cells.
pub fn sweep(
    train_corpus: &LabeledCorpus,
    test_corpus: &LabeledCorpus,
    config: &PipelineConfig,
    widths: &[usize],
    kinds: &[FeatureKind],
) -> Result<SweepTable> {
    if widths.is_empty() || kinds.is_empty() {
        return Err(Error::config(
            "sweep needs at least one width and one feature set",
        ));
    }
    let mut cells = vec![Vec::with_capacity(kinds.len()); widths.len()];
    for &kind in kinds {
        let mut column_config = config.clone();
        column_config.feature_kind = kind;

        let (stop, mut features) = match kind {
            FeatureKind::Learned => {
                let (s, f, _) = learn_dictionaries(train_corpus, &column_config.learn)?;
                (s, f)
            }
            FeatureKind::Trigram => {
                let list = build_wordform_list(train_corpus);
                let threshold = column_config
                    .learn
                    .effective_stop_threshold(list.total_mass());
                let s = find_stop_words(&list, threshold)?;
                let f = trigram_features(train_corpus, &s, column_config.trigram_count)?;
                (s, f)
            }
        };
        let (dfs, n_docs) =
            document_frequencies(train_corpus, &stop, &features, column_config.match_policy);
        features.set_document_frequencies(&dfs, n_docs)?;

        let vec_of = |corpus: &LabeledCorpus| -> Result<Vec<Vec<f64>>> {
            corpus
                .documents()
                .iter()
                .map(|doc| {
                    let ft =
                        to_feature_text(&doc.text, &stop, &features, column_config.match_policy);
                    Ok(to_vector(&ft, &features, column_config.weighting)?.values)
                })
                .collect()
        };
        let train_rows = vec_of(train_corpus)?;
        let test_rows = vec_of(test_corpus)?;

        let cap = widths.iter().copied().max().unwrap_or(1);
        let projection = match column_config.method {
            ReductionMethod::Pca => fit_pca_capped(&train_rows, cap),
            ReductionMethod::Svd => fit_svd_capped(&train_rows, cap),
        }?;

        for (row_idx, &width) in widths.iter().enumerate() {
            if width > projection.output_dim() {
                cells[row_idx].push(SweepCell::Unavailable(format!(
                    "width {width} exceeds the fitted rank {}",
                    projection.output_dim()
                )));
                continue;
            }
            let model = projection.truncated(width)?;
            let mut samples = Vec::with_capacity(train_rows.len());
            for (row, doc) in train_rows.iter().zip(train_corpus.documents()) {
                samples.push((model.project(row)?, doc.label));
            }
            let classifier = fit(
                &samples,
                train_corpus.class_names(),
                &FitOptions {
                    order: column_config.order,
                    ridge: column_config.ridge,
                    allow_pseudo_inverse: true,
                },
            )?;
            let mut errors = 0usize;
            for (row, doc) in test_rows.iter().zip(test_corpus.documents()) {
                let truth = train_corpus
                    .class_names()
                    .iter()
                    .position(|c| c == &test_corpus.class_names()[doc.label])
                    .ok_or_else(|| {
                        Error::input(format!(
                            "test corpus labels class '{}' which the training corpus does not know",
                            test_corpus.class_names()[doc.label]
                        ))
                    })?;
                let scores = classifier.predict(&model.project(row)?)?;
                if decide(&scores)? != truth {
                    errors += 1;
                }
            }
            cells[row_idx].push(SweepCell::ErrorPercent(
                100.0 * errors as f64 / test_corpus.len() as f64,
            ));
        }
    }
    Ok(SweepTable {
        rows: widths.to_vec(),
        columns: kinds.iter().map(|&k| feature_set_label(k)).collect(),
        cells,
    })
}

/// Seeded shuffle split: `ratio` of the documents become the first corpus,
/// the rest the second. Class names are shared.
pub fn split_corpus(
    corpus: &LabeledCorpus,
    seed: u64,
    ratio: f64,
) -> Result<(LabeledCorpus, LabeledCorpus)> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::config(
            "split ratio must lie strictly between 0 and 1",
        ));
    }
    let mut indices: Vec<usize> = (0..corpus.len()).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let cut = ((corpus.len() as f64) * ratio).round() as usize;
    let cut = cut.clamp(1, corpus.len().saturating_sub(1).max(1));
    let pick = |idxs: &[usize]| -> Vec<crate::corpus::Document> {
        let mut sorted = idxs.to_vec();
        sorted.sort_unstable();
        sorted
            .into_iter()
            .map(|i| corpus.documents()[i].clone())
            .collect()
    };
    let first = LabeledCorpus::new(pick(&indices[..cut]), corpus.class_names().to_vec())?;
    let second = LabeledCorpus::new(pick(&indices[cut..]), corpus.class_names().to_vec())?;
    Ok((first, second))
}
