//! Model directories: a `manifest.json` plus one binary matrix file per
//! transform or class matrix.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::{ClassifierMode, ClassifierModel};
use crate::data::io::{read_raw_matrix, write_atomic, write_raw_matrix, MatrixFormat};
use crate::error::{Error, Result};
use crate::learn::{LearnConfig, TransformKind, TransformModel};
use crate::linalg::Matrix;

pub const MANIFEST: &str = "manifest.json";
const TRANSFORM_FORMAT: &str = "lrt-transform";
const CLASSIFIER_FORMAT: &str = "lrt-classifier";
const VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformManifest {
    format: String,
    version: u32,
    kind: TransformKind,
    config: LearnConfig,
    transforms: Vec<String>,
    objective_trace: Vec<f64>,
    norm_trace: Vec<f64>,
    outer_objectives: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifierManifest {
    format: String,
    version: u32,
    mode: ClassifierMode,
    sparsity: usize,
    gamma: f64,
    class_ids: Vec<usize>,
    class_matrices: Vec<String>,
    transform: TransformManifest,
}

fn write_manifest<T: Serialize>(dir: &Path, manifest: &T) -> Result<()> {
    let text =
        serde_json::to_string_pretty(manifest).map_err(|e| Error::param(format!("cannot serialize manifest: {e}")))?;
    write_atomic(&dir.join(MANIFEST), text.as_bytes())
}

fn read_manifest<T: for<'de> Deserialize<'de>>(dir: &Path) -> Result<T> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(&path, e.to_string()))
}

fn check_header(dir: &Path, format: &str, expected: &str, version: u32) -> Result<()> {
    let path = dir.join(MANIFEST);
    if format != expected {
        return Err(Error::parse(&path, format!("format {format:?}, expected {expected:?}")));
    }
    if version != VERSION {
        return Err(Error::parse(&path, format!("unsupported version {version}")));
    }
    Ok(())
}

/// Matrix file named by a manifest; names must be plain file names.
fn read_member(dir: &Path, name: &str) -> Result<Matrix> {
    if name.is_empty() || name.contains(['/', '\\']) || name == ".." {
        return Err(Error::parse(
            dir.join(MANIFEST),
            format!("invalid member file name {name:?}"),
        ));
    }
    read_raw_matrix(&dir.join(name), MatrixFormat::Binary)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn transform_manifest(dir: &Path, model: &TransformModel) -> Result<TransformManifest> {
    let mut names = Vec::with_capacity(model.transforms.len());
    for (i, t) in model.transforms.iter().enumerate() {
        let name = format!("transform_{i}.bin");
        write_raw_matrix(&dir.join(&name), t, MatrixFormat::Binary)?;
        names.push(name);
    }
    Ok(TransformManifest {
        format: TRANSFORM_FORMAT.into(),
        version: VERSION,
        kind: model.kind,
        config: model.config.clone(),
        transforms: names,
        objective_trace: model.objective_trace.clone(),
        norm_trace: model.norm_trace.clone(),
        outer_objectives: model.outer_objectives.clone(),
    })
}

fn transform_from_manifest(dir: &Path, m: TransformManifest) -> Result<TransformModel> {
    check_header(dir, &m.format, TRANSFORM_FORMAT, m.version)?;
    let path = dir.join(MANIFEST);
    if m.transforms.is_empty() {
        return Err(Error::parse(&path, "no transforms listed"));
    }
    if m.kind == TransformKind::Global && m.transforms.len() != 1 {
        return Err(Error::parse(&path, "a global model has exactly one transform"));
    }
    let transforms = m
        .transforms
        .iter()
        .map(|name| read_member(dir, name))
        .collect::<Result<Vec<_>>>()?;
    if transforms.iter().any(|t| t.shape() != transforms[0].shape()) {
        return Err(Error::parse(&path, "transforms have different shapes"));
    }
    Ok(TransformModel {
        kind: m.kind,
        transforms,
        objective_trace: m.objective_trace,
        norm_trace: m.norm_trace,
        outer_objectives: m.outer_objectives,
        config: m.config,
    })
}

pub fn save_transform_model(dir: &Path, model: &TransformModel) -> Result<()> {
    create_dir(dir)?;
    let manifest = transform_manifest(dir, model)?;
    write_manifest(dir, &manifest)
}

pub fn load_transform_model(dir: &Path) -> Result<TransformModel> {
    let m: TransformManifest = read_manifest(dir)?;
    transform_from_manifest(dir, m)
}

pub fn save_classifier(dir: &Path, model: &ClassifierModel) -> Result<()> {
    create_dir(dir)?;
    let transform = transform_manifest(dir, &model.transform)?;
    let mut names = Vec::with_capacity(model.class_matrices.len());
    for (c, m) in model.class_matrices.iter().enumerate() {
        let name = format!("class_{c}.bin");
        write_raw_matrix(&dir.join(&name), m, MatrixFormat::Binary)?;
        names.push(name);
    }
    let manifest = ClassifierManifest {
        format: CLASSIFIER_FORMAT.into(),
        version: VERSION,
        mode: model.mode,
        sparsity: model.sparsity,
        gamma: model.transform.config.gamma,
        class_ids: (0..model.class_matrices.len()).collect(),
        class_matrices: names,
        transform,
    };
    write_manifest(dir, &manifest)
}

pub fn load_classifier(dir: &Path) -> Result<ClassifierModel> {
    let m: ClassifierManifest = read_manifest(dir)?;
    check_header(dir, &m.format, CLASSIFIER_FORMAT, m.version)?;
    let path = dir.join(MANIFEST);
    if m.sparsity == 0 {
        return Err(Error::parse(&path, "sparsity must be >= 1"));
    }
    if m.class_ids != (0..m.class_matrices.len()).collect::<Vec<_>>() {
        return Err(Error::parse(&path, "class ids must be 0..C in order"));
    }
    let transform = transform_from_manifest(dir, m.transform)?;
    let class_matrices = m
        .class_matrices
        .iter()
        .map(|name| read_member(dir, name))
        .collect::<Result<Vec<_>>>()?;
    if class_matrices.is_empty() {
        return Err(Error::parse(&path, "no class matrices listed"));
    }
    if transform.kind == TransformKind::PerClass && transform.transforms.len() != class_matrices.len() {
        return Err(Error::parse(
            &path,
            "per-class transform count differs from class count",
        ));
    }
    if class_matrices.iter().any(|c| c.nrows() != transform.output_dim()) {
        return Err(Error::parse(
            &path,
            "class matrices do not match the transform output dimension",
        ));
    }
    Ok(ClassifierModel {
        transform,
        mode: m.mode,
        sparsity: m.sparsity,
        class_matrices,
    })
}
