use std::fs;
use std::path::{Path, PathBuf};

use lrt_core::classify::{classify_point, train_classifier, ClassifierMode};
use lrt_core::cluster::{
    canonical_labels, lrsc, lrsc_objective, misclassification_rate, ClustererRegistry, ClustererSpec, LrscIteration,
};
use lrt_core::data::io::{load_labels, load_matrix, save_labels, save_matrix, MatrixFormat};
use lrt_core::data::{generate_synthetic, SyntheticSpec};
use lrt_core::learn::{learn_global, learn_online, learn_per_class, TransformKind, TransformModel};
use lrt_core::linalg::{select_columns, Matrix};
use lrt_core::persist::{load_transform_model, save_classifier, save_transform_model};
use lrt_core::{Error, LabeledDataset, Result};

use crate::args::{AnglesArgs, ClassifyArgs, Cli, ClusterArgs, Command, LearnArgs, LearnMode, ModeArg, SynthArgs};
use crate::config::{required, Component, RunConfig};
use crate::report::{group_stats, num, opt_num, Csv};

/// Run a parsed command line. Human-readable results go to stdout.
pub fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    match cli.command {
        Command::Synth(a) => synth(&cfg, a),
        Command::Learn(a) => learn(&cfg, a),
        Command::Cluster(a) => cluster(&cfg, a),
        Command::Classify(a) => classify(&cfg, a),
        Command::Angles(a) => angles(&cfg, a),
    }
}

fn load_points(path: &Path) -> Result<Matrix> {
    load_matrix(path, MatrixFormat::from_path(path))
}

fn load_dataset(data: &Path, labels: &Path) -> Result<LabeledDataset> {
    LabeledDataset::from_raw_labels(load_points(data)?, &load_labels(labels)?)
}

fn parse_spec(text: &str) -> Result<SyntheticSpec> {
    let (body, origin) = if text.trim_start().starts_with('{') {
        (text.to_string(), PathBuf::from("<inline spec>"))
    } else {
        let path = PathBuf::from(text);
        let body = fs::read_to_string(&path).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?;
        (body, path)
    };
    serde_json::from_str(&body).map_err(|e| Error::Parse {
        path: origin,
        message: e.to_string(),
    })
}

fn synth(cfg: &RunConfig, a: SynthArgs) -> Result<()> {
    let spec = match (&a.spec, &cfg.synth) {
        (Some(text), _) => parse_spec(text)?,
        (None, Some(spec)) => spec.clone(),
        (None, None) => return Err(Error::Parameter("--spec or a config synth section is required".into())),
    };
    let s = generate_synthetic(&spec, cfg.seed_for(Component::Synth))?;
    save_matrix(
        &a.out_matrix,
        s.dataset.points(),
        MatrixFormat::from_path(&a.out_matrix),
    )?;
    if let Some(path) = &a.out_labels {
        save_labels(path, s.dataset.labels())?;
    }
    if let Some(path) = &a.out_bases {
        let d = spec.ambient_dim;
        let mut csv = Csv::new(
            ["subspace".to_string(), "vector".to_string()]
                .into_iter()
                .chain((0..d).map(|i| format!("x{i}"))),
        );
        for (c, basis) in s.bases.iter().enumerate() {
            for (k, col) in basis.matrix().column_iter().enumerate() {
                let mut row = vec![c.to_string(), k.to_string()];
                row.extend(col.iter().map(|&v| num(v)));
                csv.push(row);
            }
        }
        csv.write(path)?;
    }
    println!(
        "wrote {} points in R^{} from {} subspaces",
        s.dataset.len(),
        s.dataset.dim(),
        s.bases.len()
    );
    Ok(())
}

fn learn(cfg: &RunConfig, a: LearnArgs) -> Result<()> {
    let data_path = required(a.data, &cfg.io.data, "--data")?;
    let labels_path = required(a.labels, &cfg.io.labels, "--labels")?;
    let data = load_dataset(&data_path, &labels_path)?;
    let mut lc = cfg.learn_config();
    if let Some(it) = a.iterations {
        lc.iterations = it;
    }
    if let Some(b) = a.minibatches {
        lc.minibatches = b;
    }
    let model = match a.mode {
        LearnMode::Global => learn_global(&data, &lc, None)?,
        LearnMode::PerClass => learn_per_class(&data, &lc)?,
        LearnMode::Online => learn_online(&data, &lc)?,
    };
    save_transform_model(&a.out_model, &model)?;
    if let Some(path) = &a.trace_csv {
        let mut csv = Csv::new(["iteration", "objective", "spectral_norm_T"]);
        for (i, (o, n)) in model.objective_trace.iter().zip(&model.norm_trace).enumerate() {
            csv.push(vec![i.to_string(), num(*o), num(*n)]);
        }
        csv.write(path)?;
    }
    let first = model.objective_trace.first().copied().unwrap_or(f64::NAN);
    let last = model.objective_trace.last().copied().unwrap_or(f64::NAN);
    println!("objective {first} -> {last}");
    Ok(())
}

fn global_transform(model: &TransformModel) -> Result<&Matrix> {
    if model.kind != TransformKind::Global {
        return Err(Error::Parameter(
            "clustering needs a global transform; per-class models need labels".into(),
        ));
    }
    Ok(&model.transforms[0])
}

fn clusterer_spec(cfg: &RunConfig, a: &ClusterArgs) -> Result<ClustererSpec> {
    let mut spec = match a.method.as_deref() {
        None => cfg.clusterer.clone(),
        Some("rssc") => match &cfg.clusterer {
            s @ ClustererSpec::Rssc { .. } => s.clone(),
            _ => ClustererSpec::default(),
        },
        Some(name) => ClustererSpec::Plugin { name: name.to_string() },
    };
    if let Some(k) = a.neighbors {
        match &mut spec {
            ClustererSpec::Rssc { neighbors, .. } => *neighbors = k,
            ClustererSpec::Plugin { name } => {
                return Err(Error::Parameter(format!("-K applies to rssc, not {name}")));
            }
        }
    }
    Ok(spec)
}

fn groups(points: &Matrix, assignments: &[usize], c: usize) -> Vec<Matrix> {
    (0..c)
        .map(|k| {
            let idx: Vec<usize> = (0..assignments.len()).filter(|&i| assignments[i] == k).collect();
            select_columns(points, &idx)
        })
        .collect()
}

fn cluster(cfg: &RunConfig, a: ClusterArgs) -> Result<()> {
    let data_path = required(a.data.clone(), &cfg.io.data, "--data")?;
    let mut y = load_points(&data_path)?;
    if let Some(dir) = a.model.clone().or_else(|| cfg.io.model.clone()) {
        let model = load_transform_model(&dir)?;
        let t = global_transform(&model)?;
        if t.ncols() != y.nrows() {
            return Err(Error::Dimension(format!(
                "model expects dimension {}, data has {}",
                t.ncols(),
                y.nrows()
            )));
        }
        y = t * y;
    }
    let c = a.clusters;
    let truth = match a.truth.clone().or_else(|| cfg.io.truth.clone()) {
        Some(path) => Some(
            LabeledDataset::from_raw_labels(y.clone(), &load_labels(&path)?)?
                .labels()
                .to_vec(),
        ),
        None => None,
    };
    let clusterer = clusterer_spec(cfg, &a)?.build(&ClustererRegistry::default())?;
    let seed = cfg.seed_for(Component::Cluster);
    let lambda = cfg.lrsc.objective_lambda;

    let passes: Vec<LrscIteration> = if a.lrsc {
        let mut lc = cfg.lrsc.clone();
        if let Some(m) = a.max_outer {
            lc.max_outer = m;
        }
        let lcfg = cfg.learn_config();
        lrsc(&y, c, clusterer.as_ref(), &lcfg, &lc, seed, truth.as_deref())?.iterations
    } else {
        if c == 0 || c > y.ncols() {
            return Err(Error::Parameter(format!("cluster count {c} not in 1..={}", y.ncols())));
        }
        let assignments = canonical_labels(&clusterer.cluster(&y, c, seed)?);
        let t = Matrix::identity(y.nrows(), y.nrows());
        let misclassification = truth
            .as_deref()
            .map(|t| misclassification_rate(&assignments, t))
            .transpose()?;
        let objective = lrsc_objective(&t, &assignments, &y, lambda)?;
        vec![LrscIteration {
            assignments,
            misclassification,
            objective,
            transform: t,
        }]
    };

    let mut header = vec![
        "iteration".to_string(),
        "misclassification".into(),
        "lrsc_objective".into(),
    ];
    header.extend((0..c).map(|k| format!("nuclear_norm_{k}")));
    for p in 0..c {
        for q in p + 1..c {
            header.push(format!("smallest_angle_{p}_{q}"));
        }
    }
    let mut csv = Csv::new(header);
    for (i, pass) in passes.iter().enumerate() {
        let ty = &pass.transform * &y;
        let (norms, pairs) = group_stats(&groups(&ty, &pass.assignments, c), a.subspace_dim)?;
        let mut row = vec![
            (i + 1).to_string(),
            opt_num(pass.misclassification),
            num(pass.objective),
        ];
        row.extend(norms.iter().map(|&v| num(v)));
        row.extend(pairs.iter().map(|p| num(p.smallest_angle)));
        csv.push(row);
    }
    if let Some(path) = &a.report_csv {
        csv.write(path)?;
    }
    let last = passes.last().expect("at least one pass");
    if let Some(path) = &a.out_assignments {
        save_labels(path, &last.assignments)?;
    }
    match last.misclassification {
        Some(m) => println!("{} passes, misclassification {m}", passes.len()),
        None => println!("{} passes", passes.len()),
    }
    Ok(())
}

fn classify(cfg: &RunConfig, a: ClassifyArgs) -> Result<()> {
    let train = load_dataset(
        &required(a.train_data, &cfg.io.data, "--train-data")?,
        &required(a.train_labels, &cfg.io.labels, "--train-labels")?,
    )?;
    let test_points = load_points(&required(a.test_data, &cfg.io.test_data, "--test-data")?)?;
    let test_labels = load_labels(&required(a.test_labels, &cfg.io.test_labels, "--test-labels")?)?;
    if test_labels.len() != test_points.ncols() {
        return Err(Error::Dimension(format!(
            "{} test labels for {} test points",
            test_labels.len(),
            test_points.ncols()
        )));
    }
    if test_points.ncols() == 0 {
        return Err(Error::Parameter("test set is empty".into()));
    }
    let transform = match a.model.or_else(|| cfg.io.model.clone()) {
        Some(dir) => load_transform_model(&dir)?,
        None => TransformModel::identity(train.dim()),
    };
    let mode = match a.mode {
        Some(ModeArg::Nn) => ClassifierMode::Nn,
        Some(ModeArg::Omp) => ClassifierMode::Omp,
        None => cfg.classifier.mode,
    };
    let sparsity = a.sparsity.unwrap_or(cfg.classifier.sparsity);
    let model = train_classifier(&train, &transform, mode, sparsity, &cfg.classifier.rpca)?;
    if let Some(dir) = &a.save_classifier {
        save_classifier(dir, &model)?;
    }

    let mut csv = Csv::new(["index", "true", "predicted", "residual"]);
    let mut correct = 0usize;
    for (j, &truth) in test_labels.iter().enumerate() {
        let (predicted, score) = classify_point(&model, &test_points.column(j).into_owned())?;
        if truth == predicted as i64 {
            correct += 1;
        }
        csv.push(vec![
            j.to_string(),
            truth.to_string(),
            predicted.to_string(),
            num(score),
        ]);
    }
    if let Some(path) = &a.out_report {
        csv.write(path)?;
    }
    println!("accuracy: {}", correct as f64 / test_labels.len() as f64);
    Ok(())
}

fn angle_rows(
    csv: &mut Csv,
    stage: &str,
    class_groups: &[Matrix],
    pair_groups: impl Fn(usize, usize) -> (Matrix, Matrix),
    dim: Option<usize>,
) -> Result<()> {
    let (norms, _) = group_stats(class_groups, dim)?;
    let c = class_groups.len();
    for p in 0..c {
        for q in p + 1..c {
            let (x, y) = pair_groups(p, q);
            let (_, pairs) = group_stats(&[x, y], dim)?;
            let s = pairs[0];
            csv.push(vec![
                stage.into(),
                "smallest_angle".into(),
                p.to_string(),
                q.to_string(),
                num(s.smallest_angle),
            ]);
            csv.push(vec![
                stage.into(),
                "mean_cosine".into(),
                p.to_string(),
                q.to_string(),
                num(s.mean_cosine),
            ]);
        }
    }
    for (k, n) in norms.iter().enumerate() {
        csv.push(vec![
            stage.into(),
            "nuclear_norm".into(),
            k.to_string(),
            String::new(),
            num(*n),
        ]);
    }
    Ok(())
}

fn angles(cfg: &RunConfig, a: AnglesArgs) -> Result<()> {
    let data = load_dataset(
        &required(a.data, &cfg.io.data, "--data")?,
        &required(a.labels, &cfg.io.labels, "--labels")?,
    )?;
    let c = data.num_classes();
    let raw: Vec<Matrix> = (0..c).map(|k| data.class_points(k)).collect();
    let mut csv = Csv::new(["stage", "quantity", "class_a", "class_b", "value"]);
    angle_rows(
        &mut csv,
        "before",
        &raw,
        |p, q| (raw[p].clone(), raw[q].clone()),
        a.subspace_dim,
    )?;
    if let Some(dir) = a.model.or_else(|| cfg.io.model.clone()) {
        let model = load_transform_model(&dir)?;
        if model.input_dim() != data.dim() {
            return Err(Error::Dimension(format!(
                "model expects dimension {}, data has {}",
                model.input_dim(),
                data.dim()
            )));
        }
        if model.kind == TransformKind::PerClass && model.transforms.len() != c {
            return Err(Error::Dimension(format!(
                "{} per-class transforms for {c} classes",
                model.transforms.len()
            )));
        }
        let t = |k: usize| model.transform_for(Some(k)).expect("checked above");
        let after: Vec<Matrix> = (0..c).map(|k| t(k) * &raw[k]).collect();
        angle_rows(
            &mut csv,
            "after",
            &after,
            |p, q| (t(p) * &raw[p], t(p) * &raw[q]),
            a.subspace_dim,
        )?;
    }
    csv.write(&a.out_csv)?;
    println!("wrote {} rows", csv.len());
    Ok(())
}

/// Exit status for a failed command: 1 for numerical failures, 2 for bad
/// input or configuration.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numerical(_) | Error::Singular(_) | Error::Degenerate(_) => 1,
        _ => 2,
    }
}
