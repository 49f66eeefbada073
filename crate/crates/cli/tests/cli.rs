use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lrt_core::data::io::{load_labels, load_matrix, MatrixFormat};

const TWO_LINES: &str = r#"{"ambient_dim": 2, "subspace_dims": [1, 1], "points_per_subspace": 100,
    "noise_sigma": 0.01, "orientation": {"kind": "pair_angle", "angle": 0.7853981633974483}}"#;

const ORTHOGONAL_LINES: &str = r#"{"ambient_dim": 3, "subspace_dims": [1, 1, 1], "points_per_subspace": 50,
    "orientation": {"kind": "explicit", "bases": [[[1, 0, 0]], [[0, 1, 0]], [[0, 0, 1]]]}}"#;

fn lrt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrt"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = lrt(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn synth(dir: &Path, spec: &str, stem: &str) {
    let matrix = format!("{stem}.csv");
    let labels = format!("{stem}_labels.txt");
    ok(
        dir,
        &[
            "synth",
            "--spec",
            spec,
            "--out-matrix",
            &matrix,
            "--out-labels",
            &labels,
        ],
    );
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn synth_writes_loadable_files() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(
        dir,
        &[
            "synth",
            "--spec",
            TWO_LINES,
            "--out-matrix",
            "a.bin",
            "--out-labels",
            "a.txt",
            "--out-bases",
            "b.csv",
        ],
    );
    let m = load_matrix(&dir.join("a.bin"), MatrixFormat::Binary).unwrap();
    assert_eq!(m.shape(), (2, 200));
    let labels = load_labels(&dir.join("a.txt")).unwrap();
    assert_eq!(labels.len(), 200);
    let bases = csv_rows(&dir.join("b.csv"));
    assert_eq!(bases[0], ["subspace", "vector", "x0", "x1"]);
    assert_eq!(bases.len(), 3);
}

#[test]
fn synth_is_seeded() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    for (out, seed) in [("a.csv", "5"), ("b.csv", "5"), ("c.csv", "6")] {
        ok(
            dir,
            &["--seed", seed, "synth", "--spec", TWO_LINES, "--out-matrix", out],
        );
    }
    let read = |name: &str| fs::read(dir.join(name)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_ne!(read("a.csv"), read("c.csv"));
}

#[test]
fn negative_noise_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = TWO_LINES.replace("0.01", "-0.5");
    let out = lrt(tmp.path(), &["synth", "--spec", &spec, "--out-matrix", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid noise sigma"));
}

#[test]
fn learn_trace_has_one_row_per_step() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    synth(dir, TWO_LINES, "d");
    let stdout = ok(
        dir,
        &[
            "learn",
            "--data",
            "d.csv",
            "--labels",
            "d_labels.txt",
            "--out-model",
            "m",
            "--trace-csv",
            "t.csv",
        ],
    );
    assert!(stdout.contains("objective"));
    let rows = csv_rows(&dir.join("t.csv"));
    assert_eq!(rows[0], ["iteration", "objective", "spectral_norm_T"]);
    assert_eq!(rows.len(), 102);
    let value = |r: &Vec<String>| r[1].parse::<f64>().unwrap();
    assert!(value(&rows[101]) < value(&rows[1]));
    assert!(dir.join("m/manifest.json").exists());
}

#[test]
fn online_trace_concatenates_batches() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    synth(dir, TWO_LINES, "d");
    ok(
        dir,
        &[
            "learn",
            "--data",
            "d.csv",
            "--labels",
            "d_labels.txt",
            "--mode",
            "online",
            "--minibatches",
            "5",
            "--iterations",
            "10",
            "--out-model",
            "m",
            "--trace-csv",
            "t.csv",
        ],
    );
    assert_eq!(csv_rows(&dir.join("t.csv")).len(), 1 + 1 + 5 * 10);
}

#[test]
fn cluster_requires_a_cluster_count() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lrt(tmp.path(), &["cluster", "--data", "d.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orthogonal_lines_cluster_exactly() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    synth(dir, ORTHOGONAL_LINES, "d");
    let stdout = ok(
        dir,
        &[
            "cluster",
            "--data",
            "d.csv",
            "-C",
            "3",
            "-K",
            "6",
            "--truth",
            "d_labels.txt",
            "--report-csv",
            "r.csv",
            "--out-assignments",
            "a.txt",
        ],
    );
    assert!(stdout.contains("misclassification 0"), "{stdout}");
    let rows = csv_rows(&dir.join("r.csv"));
    assert_eq!(&rows[0][..3], ["iteration", "misclassification", "lrsc_objective"]);
    assert_eq!(rows[1][1], "0.0");
    assert_eq!(load_labels(&dir.join("a.txt")).unwrap().len(), 150);
}

#[test]
fn lrsc_report_has_a_row_per_pass() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    synth(dir, TWO_LINES, "d");
    ok(
        dir,
        &[
            "cluster",
            "--data",
            "d.csv",
            "-C",
            "2",
            "--lrsc",
            "--max-outer",
            "3",
            "--truth",
            "d_labels.txt",
            "--report-csv",
            "r.csv",
        ],
    );
    let rows = csv_rows(&dir.join("r.csv"));
    assert!((2..=4).contains(&rows.len()));
    assert_eq!(rows[0].len(), 3 + 2 + 1);
    for r in &rows[1..] {
        assert!(r[1].parse::<f64>().is_ok());
    }
}

#[test]
fn plugin_clusterer_by_name() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    synth(dir, ORTHOGONAL_LINES, "d");
    ok(dir, &["cluster", "--data", "d.csv", "-C", "3", "--method", "kmeans"]);
    let out = lrt(dir, &["cluster", "--data", "d.csv", "-C", "3", "--method", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_manifest_names_its_path() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    synth(dir, TWO_LINES, "d");
    fs::create_dir(dir.join("m")).unwrap();
    fs::write(dir.join("m/manifest.json"), "{not json").unwrap();
    let out = lrt(dir, &["cluster", "--data", "d.csv", "-C", "2", "--model", "m"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("manifest.json"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("c.json"), r#"{"learn": {"iteratons": 3}}"#).unwrap();
    let out = lrt(
        dir,
        &[
            "--config",
            "c.json",
            "synth",
            "--spec",
            TWO_LINES,
            "--out-matrix",
            "x.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c.json"));
}

#[test]
fn clean_train_equals_test_is_perfect() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    synth(dir, ORTHOGONAL_LINES, "d");
    for mode in ["nn", "omp"] {
        let stdout = ok(
            dir,
            &[
                "classify",
                "--train-data",
                "d.csv",
                "--train-labels",
                "d_labels.txt",
                "--test-data",
                "d.csv",
                "--test-labels",
                "d_labels.txt",
                "--mode",
                mode,
                "--sparsity",
                "1",
                "--out-report",
                "r.csv",
                "--save-classifier",
                "c",
            ],
        );
        assert!(stdout.contains("accuracy: 1"), "{mode}: {stdout}");
        let rows = csv_rows(&dir.join("r.csv"));
        assert_eq!(rows[0], ["index", "true", "predicted", "residual"]);
        assert_eq!(rows.len(), 151);
    }
    assert!(dir.join("c/manifest.json").exists());
}

fn angle_values(path: &Path, stage: &str, quantity: &str) -> Vec<f64> {
    csv_rows(path)
        .into_iter()
        .filter(|r| r[0] == stage && r[1] == quantity)
        .map(|r| r[4].parse().unwrap())
        .collect()
}

#[test]
fn orthogonal_classes_are_at_right_angles() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    synth(dir, ORTHOGONAL_LINES, "d");
    ok(
        dir,
        &[
            "angles",
            "--data",
            "d.csv",
            "--labels",
            "d_labels.txt",
            "--out-csv",
            "a.csv",
        ],
    );
    let angles = angle_values(&dir.join("a.csv"), "before", "smallest_angle");
    assert_eq!(angles.len(), 3);
    for a in angles {
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-8, "{a}");
    }
}

#[test]
fn learned_model_widens_angles() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    synth(dir, TWO_LINES, "d");
    ok(
        dir,
        &[
            "learn",
            "--data",
            "d.csv",
            "--labels",
            "d_labels.txt",
            "--out-model",
            "m",
        ],
    );
    ok(
        dir,
        &[
            "angles",
            "--data",
            "d.csv",
            "--labels",
            "d_labels.txt",
            "--model",
            "m",
            "--out-csv",
            "a.csv",
        ],
    );
    let path = dir.join("a.csv");
    let before = angle_values(&path, "before", "smallest_angle");
    let after = angle_values(&path, "after", "smallest_angle");
    assert_eq!(before.len(), 1);
    assert!(after[0] >= before[0], "{before:?} -> {after:?}");
}
