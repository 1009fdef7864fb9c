//! Acceptance suite for the command-line pipeline: end-to-end determinism
//! against the committed golden bundle, and the default-config snapshot.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use crossfield::lexicon::Lexicon;
use crossfield::Tau;
use crossfield_cli::config::RunConfig;

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/sample")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn copy_inputs(dst: &Path) {
    let src = fixture_dir();
    std::fs::create_dir_all(dst).unwrap();
    for name in [
        "config.json",
        "records.jsonl",
        "journals.jsonl",
        "lexicon_a.txt",
        "lexicon_b.txt",
        "labels_s1.csv",
        "labels_s2.csv",
        "labels_s3.csv",
        "labels_s4.csv",
    ] {
        std::fs::copy(src.join(name), dst.join(name)).unwrap();
    }
}

fn run_pipeline(workdir: &Path, threads: &str) {
    let status = Command::new(env!("CARGO_BIN_EXE_crossfield"))
        .args(["--threads", threads, "run", "--config", "config.json"])
        .current_dir(workdir)
        .env("RUST_LOG", "error")
        .status()
        .expect("spawn crossfield");
    assert!(status.success(), "pipeline failed with {status}");
}

/// Every file in `a`, byte-compared against its counterpart in `b`.
fn assert_trees_identical(a: &Path, b: &Path) {
    let mut files_a = Vec::new();
    collect_files(a, a, &mut files_a);
    let mut files_b = Vec::new();
    collect_files(b, b, &mut files_b);
    files_a.sort();
    files_b.sort();
    assert_eq!(files_a, files_b, "bundle file sets differ");
    for rel in &files_a {
        let bytes_a = std::fs::read(a.join(rel)).unwrap();
        let bytes_b = std::fs::read(b.join(rel)).unwrap();
        assert_eq!(bytes_a, bytes_b, "file {rel:?} differs");
    }
}

fn collect_files(dir: &Path, base: &Path, acc: &mut Vec<PathBuf>) {
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            collect_files(&path, base, acc);
        } else {
            acc.push(path.strip_prefix(base).unwrap().to_path_buf());
        }
    }
}

#[test]
fn criterion_8_end_to_end_determinism() {
    let run_one = tempfile::tempdir().unwrap();
    copy_inputs(run_one.path());
    run_pipeline(run_one.path(), "1");

    let run_four = tempfile::tempdir().unwrap();
    copy_inputs(run_four.path());
    run_pipeline(run_four.path(), "4");

    // identical across thread counts
    assert_trees_identical(&run_one.path().join("out"), &run_four.path().join("out"));
    // identical to the committed golden bundle
    assert_trees_identical(&run_one.path().join("out"), &golden_dir());

    // and a second single-threaded run reproduces itself
    let run_again = tempfile::tempdir().unwrap();
    copy_inputs(run_again.path());
    run_pipeline(run_again.path(), "1");
    assert_trees_identical(&run_again.path().join("out"), &golden_dir());

    println!("criterion 8 (byte-identical report bundle across runs and threads 1/4): PASS");
}

#[test]
fn criterion_9_default_config_snapshot() {
    let config = RunConfig::default();

    assert_eq!(config.strategies.tau_s3, Tau::new(1, 4).unwrap());
    assert_eq!(config.strategies.tau_s3.to_string(), "0.25");
    assert_eq!(config.strategies.tau_s4, Tau::new(3, 20).unwrap());
    assert_eq!(config.strategies.tau_s4.to_string(), "0.15");

    let grid: Vec<f64> = config
        .strategies
        .sweep_grid
        .iter()
        .map(|t| t.as_f64())
        .collect();
    assert_eq!(grid, vec![0.05, 0.10, 0.15, 0.20, 0.25]);
    let exact: Vec<(u64, u64)> = config
        .strategies
        .sweep_grid
        .iter()
        .map(|t| (t.numerator(), t.denominator()))
        .collect();
    assert_eq!(exact, vec![(1, 20), (1, 10), (3, 20), (1, 5), (1, 4)]);
    assert_eq!(config.strategies.absolute_grid, vec![1, 2, 3, 4, 5]);

    assert_eq!(config.sampling.sample_size, 522);
    assert_eq!(config.metrics.bootstrap_replications, 10_000);
    assert_eq!(config.metrics.confidence_level, 0.95);
    assert_eq!(
        (config.metrics.lexicon_cap_a, config.metrics.lexicon_cap_b),
        (100, 100)
    );

    // bundled lexicons: the computer-science list carries all 100 terms;
    // the recoverable neuroscience list carries 99 and is flagged short of
    // its 100-term cap
    let cs = Lexicon::bundled_computer_science();
    let neuro = Lexicon::bundled_neuroscience();
    assert_eq!(cs.len(), 100);
    assert_eq!(cs.provenance.cap, 100);
    assert!(!cs.provenance.shortfall);
    assert_eq!(neuro.len(), 99);
    assert_eq!(neuro.provenance.cap, 100);
    assert!(neuro.provenance.shortfall);

    // the default config is what an empty config document parses to
    let parsed: RunConfig = serde_json::from_str("{}").unwrap();
    assert_eq!(parsed, config);

    // and the defaults survive a serialization round trip
    let echoed: RunConfig = serde_json::from_str(&serde_json::to_string(&config).unwrap()).unwrap();
    assert_eq!(echoed, config);

    println!(
        "criterion 9 (defaults: tau_s3=0.25 tau_s4=0.15 grid 5%..25% n=522 reps=10000 level=0.95 lexicon caps 100/100): PASS"
    );
}

#[test]
fn evaluation_table_reflects_label_fixtures() {
    // cross-check two golden numbers against the committed label files
    let golden = golden_dir().join("tables/evaluation.csv");
    let table = std::fs::read_to_string(golden).unwrap();
    let mut rows: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for line in table.lines().skip(1) {
        let cells: Vec<String> = line.split(',').map(str::to_string).collect();
        rows.insert(cells[0].clone(), cells);
    }
    for strategy in ["S1", "S2", "S3", "S4"] {
        let labels = std::fs::read_to_string(
            fixture_dir().join(format!("labels_{}.csv", strategy.to_lowercase())),
        )
        .unwrap();
        let includes = labels.lines().filter(|l| l.contains(",include,")).count();
        let total = labels.lines().count() - 1;
        let expected = includes as f64 / total as f64;
        let reported: f64 = rows[strategy][2].parse().unwrap();
        assert!(
            (reported - expected).abs() < 1e-12,
            "{strategy}: golden precision {reported} vs labels {expected}"
        );
    }
}
