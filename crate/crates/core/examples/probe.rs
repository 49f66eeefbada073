use lrt_core::classify::*;
use lrt_core::data::*;
use lrt_core::decomp::RpcaConfig;
use lrt_core::learn::*;
use lrt_core::linalg::spectral_norm;
use lrt_core::rng::*;
fn main() {
    for s in 0..10u64 {
        let seed = derive_seed(42, &[8, s]);
        let q = gaussian_matrix(12, 6, &mut seeded(derive_seed(seed, &[0]))).qr().q();
        let bases = (0..3)
            .map(|c| (0..2).map(|k| q.column(2 * c + k).iter().copied().collect()).collect())
            .collect();
        let spec = SyntheticSpec {
            ambient_dim: 12,
            subspace_dims: vec![2; 3],
            points_per_subspace: 60,
            noise_sigma: 0.05,
            outlier_fraction: 0.0,
            orientation: Orientation::Explicit { bases },
        };
        let data = generate_synthetic(&spec, derive_seed(seed, &[1])).unwrap().dataset;
        let (train, test) = split_dataset(&data, 0.5, derive_seed(seed, &[2])).unwrap();
        let r = RpcaConfig::default();
        let id = TransformModel::identity(12);
        let acc = |m: &TransformModel, mode, sp| {
            evaluate_accuracy(&train_classifier(&train, m, mode, sp, &r).unwrap(), &test).unwrap()
        };
        let mut line = format!(
            "seed {s}: rawNN {:.3} idOMP {:.3}",
            acc(&id, ClassifierMode::Nn, 1),
            acc(&id, ClassifierMode::Omp, 2)
        );
        let sc = spectral_norm(train.points()).unwrap();
        let ntrain = train.with_points(train.points() / sc).unwrap();
        for it in [20, 50, 100, 300] {
            let cfg = LearnConfig {
                iterations: it,
                seed: derive_seed(seed, &[3]),
                ..LearnConfig::default()
            };
            let tm = learn_global(&train, &cfg, None).unwrap();
            let tn = learn_global(&ntrain, &cfg, None).unwrap();
            line += &format!(
                " | it{it} {:.3} norm {:.3}",
                acc(&tm, ClassifierMode::Omp, 2),
                acc(&tn, ClassifierMode::Omp, 2)
            );
        }
        println!("{line}");
    }
}
