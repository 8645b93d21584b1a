//! End-to-end runs of the `textcat` binary against the committed mini
//! corpus: every subcommand, plus the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn textcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_textcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> String {
    p.display().to_string()
}

fn train_mini(model: &Path) -> Output {
    textcat(&[
        "train",
        "--corpus",
        &path(&data_dir().join("mini/train")),
        "--config",
        &path(&data_dir().join("mini/config.conf")),
        "--model",
        &path(model),
    ])
}

#[test]
fn train_evaluate_classify_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("mini.tcm");

    let out = train_mini(&model);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("L' = 8"), "{stdout}");
    assert!(stdout.contains("training error"), "{stdout}");
    assert!(model.is_file());

    let out = textcat(&[
        "evaluate",
        "--model",
        &path(&model),
        "--corpus",
        &path(&data_dir().join("mini/test")),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("error rate"), "{stdout}");
    assert!(stdout.contains("alpha"), "{stdout}");

    let doc = data_dir().join("mini/test/beta/doc_000.txt");
    let out = textcat(&["classify", "--model", &path(&model), &path(&doc)]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let line = stdout.lines().next().unwrap();
    let mut cols = line.split('\t');
    assert!(cols.next().unwrap().contains("doc_000.txt"));
    let predicted = cols.next().unwrap();
    assert!(["alpha", "beta", "gamma"].contains(&predicted), "{line}");
    let scores = cols.next().unwrap();
    assert_eq!(scores.split(' ').count(), 3, "{line}");

    let out = textcat(&["inspect", "--model", &path(&model)]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("classes"), "{stdout}");
    assert!(stdout.contains("reconstruction error"), "{stdout}");
    assert!(stdout.contains("L'=8"), "{stdout}");
}

#[test]
fn classify_dump_features_shows_feature_text() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("mini.tcm");
    assert!(train_mini(&model).status.success());
    let doc = data_dir().join("mini/test/alpha/doc_001.txt");
    let out = textcat(&[
        "classify",
        "--model",
        &path(&model),
        "--dump-features",
        &path(&doc),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains(">>"), "{stdout}");
}

#[test]
fn learn_dict_writes_dictionaries() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("dicts");
    let out = textcat(&[
        "learn-dict",
        "--corpus",
        &path(&data_dir().join("mini/train")),
        "--config",
        &path(&data_dir().join("mini/config.conf")),
        "--out",
        &path(&out_dir),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stop = std::fs::read_to_string(out_dir.join("stopwords.txt")).unwrap();
    let feats = std::fs::read_to_string(out_dir.join("features.tsv")).unwrap();
    // Matches the committed goldens, since the inputs are identical.
    assert_eq!(
        stop,
        std::fs::read_to_string(data_dir().join("golden/stopwords.txt")).unwrap()
    );
    assert_eq!(
        feats,
        std::fs::read_to_string(data_dir().join("golden/features.tsv")).unwrap()
    );
}

#[test]
fn corrupt_writes_a_noisy_corpus_copy() {
    let dir = tempfile::tempdir().unwrap();
    let noise_file = dir.path().join("noise.conf");
    std::fs::write(&noise_file, "seed = 3\nsegmentation = 0.0\nsub = e o 1.0\n").unwrap();
    let out_dir = dir.path().join("noisy");
    let out = textcat(&[
        "corrupt",
        "--corpus",
        &path(&data_dir().join("mini/train")),
        "--noise",
        &path(&noise_file),
        "--out",
        &path(&out_dir),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("word accuracy"), "{stdout}");
    let original =
        std::fs::read_to_string(data_dir().join("mini/train/alpha/doc_000.txt")).unwrap();
    let corrupted = std::fs::read_to_string(out_dir.join("alpha/doc_000.txt")).unwrap();
    assert_eq!(corrupted, original.replace('e', "o"));
}

#[test]
fn evaluate_sweep_mode_prints_a_table() {
    let out = textcat(&[
        "evaluate",
        "--train-corpus",
        &path(&data_dir().join("mini/train")),
        "--corpus",
        &path(&data_dir().join("mini/test")),
        "--config",
        &path(&data_dir().join("mini/config.conf")),
        "--lprime",
        "2,4,8",
        "--features",
        "trigram,learned",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("vector length"), "{stdout}");
    assert!(stdout.contains("tri-gram features"), "{stdout}");
    assert!(stdout.contains("learned features"), "{stdout}");
    assert!(stdout.contains('%'), "{stdout}");
}

#[test]
fn evaluate_split_mode_works_on_one_corpus() {
    let out = textcat(&[
        "evaluate",
        "--corpus",
        &path(&data_dir().join("mini/train")),
        "--config",
        &path(&data_dir().join("mini/config.conf")),
        "--split",
        "42:0.75",
        "--lprime",
        "4",
        "--features",
        "learned",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains('%'));
}

#[test]
fn exit_code_1_for_missing_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = textcat(&[
        "train",
        "--corpus",
        "/nonexistent/corpus",
        "--model",
        &path(&dir.path().join("m.tcm")),
    ]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("input error"));
}

#[test]
fn exit_code_2_for_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.conf");
    std::fs::write(&config, "feature_threshold = 2\n").unwrap();
    let out = textcat(&[
        "train",
        "--corpus",
        &path(&data_dir().join("mini/train")),
        "--config",
        &path(&config),
        "--model",
        &path(&dir.path().join("m.tcm")),
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn exit_code_1_for_truncated_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("mini.tcm");
    assert!(train_mini(&model).status.success());
    let text = std::fs::read_to_string(&model).unwrap();
    let cut = text.find("[classifier]").unwrap();
    let broken = dir.path().join("broken.tcm");
    std::fs::write(&broken, &text[..cut + 20]).unwrap();
    let out = textcat(&["inspect", "--model", &path(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("classifier"));
}

#[test]
fn train_with_overrides_and_vector_dump() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("tri.tcm");
    let dump = dir.path().join("vectors.tsv");
    let out = textcat(&[
        "train",
        "--corpus",
        &path(&data_dir().join("mini/train")),
        "--config",
        &path(&data_dir().join("mini/config.conf")),
        "--model",
        &path(&model),
        "--features",
        "trigram",
        "--lprime",
        "6",
        "--weighting",
        "frequency",
        "--seed",
        "9",
        "--dump-vectors",
        &path(&dump),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dump_text = std::fs::read_to_string(&dump).unwrap();
    assert_eq!(dump_text.lines().count(), 24);
    let first = dump_text.lines().next().unwrap();
    let cols: Vec<&str> = first.split('\t').collect();
    assert_eq!(cols.len(), 3);
    assert!(cols[0].contains("doc_"));
    assert!(["alpha", "beta", "gamma"].contains(&cols[1]));

    // The saved bundle remembers the overrides.
    let out = textcat(&["inspect", "--model", &path(&model)]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("trigram"), "{stdout}");
    assert!(stdout.contains("L'=6"), "{stdout}");
}
