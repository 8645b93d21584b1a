//! Command-line front end for the categorization toolkit.
//!
//! Exit codes: 0 success, 1 input error, 2 config/usage error,
//! 3 numerical error.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use textcat::config::PipelineConfig;
use textcat::corpus::LabeledCorpus;
use textcat::error::{Error, Result};
use textcat::lexlearn::FeatureKind;
use textcat::noise::{corrupt_corpus, NoiseModel};
use textcat::pipeline::{self, ModelBundle};
use textcat::vectorize::{feature_text_dump, vector_dump_line};

#[derive(Parser)]
#[command(
    name = "textcat",
    version,
    about = "Corpus-adaptive text categorization: learned dictionaries, PCA reduction, least-squares polynomial classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Configuration file (`key = value`, UTF-8)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Reduced vector length L'
    #[arg(long, value_name = "N")]
    lprime: Option<usize>,
    /// Feature set to learn
    #[arg(long, value_name = "learned|trigram")]
    features: Option<String>,
    /// Coordinate weighting
    #[arg(long, value_name = "binary|frequency|idf")]
    weighting: Option<String>,
    /// Polynomial order of the classifier
    #[arg(long, value_name = "1|2")]
    order: Option<String>,
    /// Dimension-reduction method
    #[arg(long, value_name = "pca|svd")]
    method: Option<String>,
    /// Seed for every random choice of the run
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn build(&self) -> Result<PipelineConfig> {
        let mut config = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(lp) = self.lprime {
            config.l_prime = lp;
        }
        if let Some(f) = &self.features {
            config.feature_kind = f.parse()?;
        }
        if let Some(w) = &self.weighting {
            config.weighting = w.parse()?;
        }
        if let Some(o) = &self.order {
            config.order = o.parse()?;
        }
        if let Some(m) = &self.method {
            config.method = m.parse()?;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Learn the stop-word and feature dictionaries and write them out
    LearnDict {
        /// Corpus directory (`root/<class>/<doc>.txt`) or manifest file
        #[arg(long, value_name = "DIR|MANIFEST")]
        corpus: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory for stopwords.txt and features.tsv
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Train a categorizer and save the model bundle
    Train {
        #[arg(long, value_name = "DIR|MANIFEST")]
        corpus: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Where to write the model bundle
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Also dump training vectors (doc_id<TAB>label<TAB>coordinates)
        #[arg(long, value_name = "FILE")]
        dump_vectors: Option<PathBuf>,
    },
    /// Classify text files (or stdin) against a saved model
    Classify {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Text files to classify; reads stdin when empty
        #[arg(value_name = "FILE")]
        files: Vec<PathBuf>,
        /// Print each line's feature text instead of only the decision
        #[arg(long)]
        dump_features: bool,
    },
    /// Evaluate a model on a labeled corpus, or sweep widths × feature sets
    Evaluate {
        /// Saved model (single evaluation mode)
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        /// Test corpus; with --train-corpus or --split, the evaluation half
        #[arg(long, value_name = "DIR|MANIFEST")]
        corpus: PathBuf,
        /// Training corpus for sweep mode
        #[arg(long, value_name = "DIR|MANIFEST")]
        train_corpus: Option<PathBuf>,
        /// Sweep mode with one corpus: seeded shuffle split `SEED:RATIO`
        #[arg(long, value_name = "SEED:RATIO")]
        split: Option<String>,
        /// Configuration file (`key = value`, UTF-8)
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Sweep widths (defaults to 50,100,200,500)
        #[arg(long, value_name = "N[,N...]", value_delimiter = ',')]
        lprime: Vec<usize>,
        /// Sweep feature sets (defaults to trigram,learned)
        #[arg(long, value_name = "SET[,SET...]", value_delimiter = ',')]
        features: Vec<String>,
        /// Coordinate weighting override
        #[arg(long, value_name = "binary|frequency|idf")]
        weighting: Option<String>,
        /// Polynomial order override
        #[arg(long, value_name = "1|2")]
        order: Option<String>,
        /// Dimension-reduction method override
        #[arg(long, value_name = "pca|svd")]
        method: Option<String>,
        /// Seed override
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
    },
    /// Apply a recognition-noise model to a corpus and write the copy
    Corrupt {
        #[arg(long, value_name = "DIR|MANIFEST")]
        corpus: PathBuf,
        /// Noise description file
        #[arg(long, value_name = "FILE")]
        noise: PathBuf,
        /// Seed override
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Output corpus directory
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Print a model bundle's header and reconstruction-error curve
    Inspect {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::LearnDict {
            corpus,
            config,
            out,
        } => learn_dict(&corpus, &config, &out),
        Command::Train {
            corpus,
            config,
            model,
            dump_vectors,
        } => train(&corpus, &config, &model, dump_vectors.as_deref()),
        Command::Classify {
            model,
            files,
            dump_features,
        } => classify(&model, &files, dump_features),
        Command::Evaluate {
            model,
            corpus,
            train_corpus,
            split,
            config,
            lprime,
            features,
            weighting,
            order,
            method,
            seed,
        } => {
            let config_args = ConfigArgs {
                config,
                lprime: None,
                features: None,
                weighting,
                order,
                method,
                seed,
            };
            evaluate(
                model.as_deref(),
                &corpus,
                train_corpus.as_deref(),
                split.as_deref(),
                &config_args,
                &lprime,
                &features,
            )
        }
        Command::Corrupt {
            corpus,
            noise,
            seed,
            out,
        } => corrupt(&corpus, &noise, seed, &out),
        Command::Inspect { model } => {
            let bundle = ModelBundle::load(&model)?;
            print!("{}", bundle.describe());
            Ok(())
        }
    }
}

fn learn_dict(corpus_path: &Path, config_args: &ConfigArgs, out: &Path) -> Result<()> {
    let config = config_args.build()?;
    let corpus = LabeledCorpus::load(corpus_path)?;
    let (stop, features, report) = textcat::lexlearn::learn_dictionaries(&corpus, &config.learn)?;
    std::fs::create_dir_all(out)
        .map_err(|e| Error::input(format!("cannot create {}: {e}", out.display())))?;
    let stop_path = out.join("stopwords.txt");
    let feat_path = out.join("features.tsv");
    std::fs::write(&stop_path, stop.to_lines())
        .map_err(|e| Error::input(format!("cannot write {}: {e}", stop_path.display())))?;
    std::fs::write(&feat_path, features.to_tsv())
        .map_err(|e| Error::input(format!("cannot write {}: {e}", feat_path.display())))?;
    println!("{}", report.render());
    println!("wrote {} and {}", stop_path.display(), feat_path.display());
    Ok(())
}

fn train(
    corpus_path: &Path,
    config_args: &ConfigArgs,
    model_path: &Path,
    dump_vectors: Option<&Path>,
) -> Result<()> {
    let config = config_args.build()?;
    let corpus = LabeledCorpus::load(corpus_path)?;
    let started = std::time::Instant::now();
    let (bundle, report) = pipeline::train(&corpus, &config)?;
    bundle.save(model_path)?;
    print!("{}", report.render());
    println!(
        "trained in {:.1} s, model written to {}",
        started.elapsed().as_secs_f64(),
        model_path.display()
    );
    if let Some(dump) = dump_vectors {
        let mut out = String::new();
        for doc in corpus.documents() {
            let v = bundle.vectorize(&doc.text)?;
            out.push_str(&vector_dump_line(
                &doc.id,
                &corpus.class_names()[doc.label],
                &v,
            ));
            out.push('\n');
        }
        std::fs::write(dump, out)
            .map_err(|e| Error::input(format!("cannot write {}: {e}", dump.display())))?;
    }
    Ok(())
}

fn classify(model_path: &Path, files: &[PathBuf], dump_features: bool) -> Result<()> {
    let bundle = ModelBundle::load(model_path)?;
    let mut inputs: Vec<(String, String)> = Vec::new();
    if files.is_empty() {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::input(format!("cannot read stdin: {e}")))?;
        inputs.push(("<stdin>".to_string(), text));
    } else {
        for path in files {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
            inputs.push((path.display().to_string(), text));
        }
    }
    for (name, text) in &inputs {
        if dump_features {
            print!(
                "{}",
                feature_text_dump(
                    text,
                    &bundle.stop,
                    &bundle.features,
                    bundle.config.match_policy
                )
            );
        }
        let (class, scores) = bundle.classify(text)?;
        let rendered: Vec<String> = scores.iter().map(|s| format!("{s:.4}")).collect();
        println!("{name}\t{class}\t{}", rendered.join(" "));
    }
    Ok(())
}

fn evaluate(
    model: Option<&Path>,
    corpus_path: &Path,
    train_corpus: Option<&Path>,
    split: Option<&str>,
    config_args: &ConfigArgs,
    lprime_list: &[usize],
    feature_sets: &[String],
) -> Result<()> {
    if let Some(model_path) = model {
        let bundle = ModelBundle::load(model_path)?;
        let test = LabeledCorpus::load(corpus_path)?;
        let report = pipeline::evaluate(&bundle, &test)?;
        print!("{}", report.render());
        return Ok(());
    }

    // Sweep mode.
    let config = config_args.build()?;
    let (train_c, test_c) = match (train_corpus, split) {
        (Some(train_path), None) => (
            LabeledCorpus::load(train_path)?,
            LabeledCorpus::load(corpus_path)?,
        ),
        (None, Some(split)) => {
            let (seed, ratio) = parse_split(split)?;
            let corpus = LabeledCorpus::load(corpus_path)?;
            pipeline::split_corpus(&corpus, seed, ratio)?
        }
        _ => {
            return Err(Error::config(
                "evaluate needs either --model, or sweep inputs: --train-corpus, or --split SEED:RATIO",
            ));
        }
    };
    let widths: Vec<usize> = if lprime_list.is_empty() {
        vec![50, 100, 200, 500]
    } else {
        lprime_list.to_vec()
    };
    let kinds: Vec<FeatureKind> = if feature_sets.is_empty() {
        vec![FeatureKind::Trigram, FeatureKind::Learned]
    } else {
        feature_sets
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?
    };
    let table = pipeline::sweep(&train_c, &test_c, &config, &widths, &kinds)?;
    print!("{}", table.render());
    Ok(())
}

fn parse_split(s: &str) -> Result<(u64, f64)> {
    let (seed, ratio) = s
        .split_once(':')
        .ok_or_else(|| Error::config("--split expects SEED:RATIO, e.g. 42:0.8"))?;
    let seed: u64 = seed
        .parse()
        .map_err(|_| Error::config(format!("--split: bad seed '{seed}'")))?;
    let ratio: f64 = ratio
        .parse()
        .map_err(|_| Error::config(format!("--split: bad ratio '{ratio}'")))?;
    Ok((seed, ratio))
}

fn corrupt(corpus_path: &Path, noise_path: &Path, seed: Option<u64>, out: &Path) -> Result<()> {
    let mut noise = NoiseModel::load(noise_path)?;
    if let Some(seed) = seed {
        noise = noise.with_seed(seed);
    }
    let corpus = LabeledCorpus::load(corpus_path)?;
    let (corrupted, stats) = corrupt_corpus(&corpus, &noise);
    for (i, doc) in corrupted.documents().iter().enumerate() {
        let class = &corrupted.class_names()[doc.label];
        let dir = out.join(class);
        std::fs::create_dir_all(&dir)
            .map_err(|e| Error::input(format!("cannot create {}: {e}", dir.display())))?;
        let name = Path::new(&doc.id)
            .file_name()
            .map(|n| n.to_string_lossy().to_string())
            .unwrap_or_else(|| format!("doc_{i}.txt"));
        let path = dir.join(name);
        std::fs::write(&path, &doc.text)
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
    }
    println!(
        "corrupted {} documents into {}: character accuracy {:.1}%, word accuracy {:.1}%",
        corrupted.len(),
        out.display(),
        100.0 * stats.char_accuracy(),
        100.0 * stats.word_accuracy()
    );
    Ok(())
}
