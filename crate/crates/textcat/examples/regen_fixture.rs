//! Regenerate the committed mini corpus and its golden dictionaries.
//!
//! The corpus under `tests/data/mini` and the dictionary files under
//! `tests/data/golden` are produced by this tool and checked in, so the
//! determinism tests have a fixed point to compare against. Rerun after
//! changing the fixture generator or the learning pipeline, audit the
//! diff, and commit:
//!
//! ```text
//! cargo run -p textcat --example regen_fixture
//! ```

use std::path::PathBuf;

use textcat::config::PipelineConfig;
use textcat::corpus::LabeledCorpus;
use textcat::fixture::{generate, FixtureSpec};
use textcat::lexlearn::learn_dictionaries;

const MINI_CONFIG: &str = "\
# Mini demo corpus: 3 classes, 24 training and 12 test documents.
language = german
stop_threshold = 25
affix_threshold = 10000
feature_threshold = 3
manual_suffixes = en,er,ung
l_prime = 8
features = learned
weighting = binary
match = longest
method = pca
order = 1
ridge = auto
seed = 42
";

fn main() {
    let data_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mini = data_dir.join("mini");
    let golden = data_dir.join("golden");

    for dir in [&mini, &golden] {
        if dir.exists() {
            std::fs::remove_dir_all(dir).expect("clear old data");
        }
        std::fs::create_dir_all(dir).expect("create data dir");
    }

    let paths = generate(&mini, &FixtureSpec::mini(42)).expect("generate corpus");
    std::fs::write(mini.join("config.conf"), MINI_CONFIG).expect("write config");

    let config = PipelineConfig::from_str_config(MINI_CONFIG).expect("parse config");
    let corpus = LabeledCorpus::load(&paths.train).expect("load corpus");
    let (stop, features, report) =
        learn_dictionaries(&corpus, &config.learn).expect("learn dictionaries");
    std::fs::write(golden.join("stopwords.txt"), stop.to_lines()).expect("write stop words");
    std::fs::write(golden.join("features.tsv"), features.to_tsv()).expect("write features");

    println!("{}", report.render());
    println!("regenerated {} and {}", mini.display(), golden.display());
}
