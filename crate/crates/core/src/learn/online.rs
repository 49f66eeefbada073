use super::problem::{self, DcProblem};
use super::{
    check_classes, initial_transform, learn_global, rescaled, working_data, LearnConfig, OnlineMode, TransformKind,
    TransformModel,
};
use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, permutation, seeded};

/// Seeded random split of `0..n` into `batches` disjoint groups whose sizes
/// differ by at most one. Each group is sorted.
pub fn minibatch_partition(n: usize, batches: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if batches == 0 {
        return Err(Error::param("minibatches must be >= 1"));
    }
    if batches > n {
        return Err(Error::param(format!(
            "{batches} mini-batches requested for {n} data columns"
        )));
    }
    let order = permutation(n, &mut seeded(seed));
    let (base, extra) = (n / batches, n % batches);
    let mut out = Vec::with_capacity(batches);
    let mut start = 0;
    for b in 0..batches {
        let len = base + usize::from(b < extra);
        let mut group = order[start..start + len].to_vec();
        group.sort_unstable();
        out.push(group);
        start += len;
    }
    Ok(out)
}

/// Mini-batch learning of a global transform.
///
/// In sequential mode each batch gets `cfg.iterations` steps starting from
/// the previous batch's transform, and the trace concatenates the phases. In
/// summed mode each step uses the sum of the batch subgradients. Traces
/// always record the objective on the full data. `minibatches = 1` is the
/// same as [`learn_global`].
pub fn learn_online(data: &LabeledDataset, cfg: &LearnConfig) -> Result<TransformModel> {
    cfg.validate()?;
    if cfg.minibatches == 1 {
        return learn_global(data, cfg, None);
    }
    if data.num_classes() == 0 {
        return Err(Error::param("at least one class is required"));
    }
    let batches = minibatch_partition(data.len(), cfg.minibatches, derive_seed(cfg.seed, &[0x0b]))?;
    let t0 = initial_transform(data.dim(), cfg, None)?;
    check_classes(&t0, data)?;
    // one scale for every batch, so the phases share an objective
    let (work, scale) = working_data(data, cfg)?;
    let full = DcProblem::global(&work);
    let parts: Vec<DcProblem> = batches.iter().map(|idx| DcProblem::global(&work.subset(idx))).collect();

    let (transform, trace, norms, outer) = match cfg.online_mode {
        OnlineMode::Summed => {
            let run = problem::solve(&parts, &full, t0, cfg, cfg.seed)?;
            (run.transform, run.trace, run.norms, run.outer)
        }
        OnlineMode::Sequential => {
            let mut t = t0;
            let mut trace = Vec::new();
            let mut norms = Vec::new();
            let mut outer = Vec::new();
            for (b, part) in parts.iter().enumerate() {
                let seed = derive_seed(cfg.seed, &[b as u64]);
                let run = problem::solve(std::slice::from_ref(part), &full, t, cfg, seed)?;
                // Each phase starts where the previous one ended.
                let skip = usize::from(b > 0);
                trace.extend_from_slice(&run.trace[skip..]);
                norms.extend_from_slice(&run.norms[skip..]);
                outer.extend_from_slice(&run.outer[skip..]);
                t = run.transform;
            }
            (t, trace, norms, outer)
        }
    };
    Ok(TransformModel {
        kind: TransformKind::Global,
        transforms: vec![transform],
        objective_trace: rescaled(trace, scale),
        norm_trace: norms,
        outer_objectives: rescaled(outer, scale),
        config: cfg.clone(),
    })
}
