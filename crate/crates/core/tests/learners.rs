mod common;

use ortho_ecoc::codes::{greedy_orthogonal_dense, harmonic_matrix, one_vs_one, one_vs_rest};
use ortho_ecoc::decode::unconstrained_orthogonal;
use ortho_ecoc::learners::{
    partition_dataset, train_logistic, train_multiclass, train_multiclass_with, BinaryLabeling,
    Dataset, Features, LogisticParams, MulticlassModel, Sample, TrainOptions,
};
use ortho_ecoc::{CodingMatrix, Error, MatrixKind, SolverKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn assert_feasible(p: &[f64]) {
    assert!(p.iter().all(|&v| v >= 0.0), "{p:?}");
    assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12, "{p:?}");
}

fn four_blobs(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    common::blobs(&common::axis_centers(4, 4.0), 60, 0.7, &mut rng)
}

#[test]
fn gaussian_posterior_is_recovered() {
    // unit-variance classes at -1 and +1: P(+1 | x) = sigmoid(2 x)
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut draw = |n: usize| -> (Vec<[f64; 1]>, Vec<i8>) {
        (0..n)
            .map(|_| {
                let y: i8 = if rng.gen() { 1 } else { -1 };
                ([y as f64 + common::normal(&mut rng)], y)
            })
            .unzip()
    };
    let (x, y) = draw(10_000);
    let model = train_logistic(&x, &y, LogisticParams::default()).unwrap();
    let (test, _) = draw(10_000);
    let err: f64 = test
        .iter()
        .map(|x| (model.decision(x) - (2.0 * sigmoid(2.0 * x[0]) - 1.0)).abs())
        .sum::<f64>()
        / test.len() as f64;
    assert!(err < 0.05, "mean posterior error {err}");
}

#[test]
fn separable_points_are_symmetric() {
    let x = [[-1.0], [1.0]];
    let model = train_logistic(&x, &[-1, 1], LogisticParams::default()).unwrap();
    assert!(model.decision(&[-1.0]) < 0.0 && model.decision(&[1.0]) > 0.0);
    assert!(model.decision(&[0.0]).abs() < 1e-9);
}

#[test]
fn featureless_data_gives_zero_decision() {
    let x = vec![[0.0, 0.0]; 10];
    let y: Vec<i8> = (0..10).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    let model = train_logistic(&x, &y, LogisticParams::default()).unwrap();
    assert!(model.weights().iter().all(|w| w.abs() < 1e-12));
    assert!(model.decision(&[3.0, -2.0]).abs() < 1e-9);
}

#[test]
fn column_labelings() {
    let a = CodingMatrix::from_columns(&[[1i8, -1, 0], [1, 1, -1], [1, 1, 1]], MatrixKind::Custom)
        .unwrap();
    let l = BinaryLabeling::from_column(&a, 0).unwrap();
    assert_eq!((l.sign(0), l.sign(1), l.included(2)), (1, -1, false));
    let l = BinaryLabeling::from_column(&a, 1).unwrap();
    assert_eq!((l.sign(0), l.sign(1), l.sign(2)), (1, 1, -1));
    assert!(matches!(
        BinaryLabeling::from_column(&a, 2),
        Err(Error::UntrainableColumn { column: 2, .. })
    ));

    let d = Dataset::new(
        (0..6)
            .map(|i| Sample {
                features: Features::Dense(vec![i as f64]),
                label: i % 3,
            })
            .collect(),
        1,
        3,
    )
    .unwrap();
    let part = partition_dataset(&d, &BinaryLabeling::from_column(&a, 0).unwrap()).unwrap();
    assert_eq!(part.indices, vec![0, 1, 3, 4]);
    assert_eq!(part.targets, vec![1, -1, 1, -1]);
    let part = partition_dataset(&d, &BinaryLabeling::from_column(&a, 1).unwrap()).unwrap();
    assert_eq!(part.indices.len(), 6);
}

#[test]
fn one_binary_per_column() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = common::blobs(&common::axis_centers(3, 4.0), 30, 0.5, &mut rng);
    let m = train_multiclass(&d, &one_vs_one(3).unwrap(), SolverKind::OneVsOneKkt).unwrap();
    assert_eq!(m.binaries().len(), 3);
    assert!(train_multiclass(&d, &one_vs_one(4).unwrap(), SolverKind::ConstrainedLsq).is_err());
    // no three-class dense orthogonal matrix has only mixed-sign columns
    assert!(greedy_orthogonal_dense(3, 0).is_err());
}

#[test]
fn blob_centers_are_classified_confidently() {
    let d = four_blobs(5);
    let centers = common::axis_centers(4, 4.0);
    for (a, solver) in [
        (
            greedy_orthogonal_dense(4, 1).unwrap(),
            SolverKind::OrthogonalFast,
        ),
        (one_vs_one(4).unwrap(), SolverKind::OneVsOneKkt),
        (one_vs_rest(4).unwrap(), SolverKind::ConstrainedLsq),
    ] {
        let model = train_multiclass(&d, &a, solver).unwrap();
        for (c, x) in centers.iter().enumerate() {
            let p = model.predict_proba(&Features::Dense(x.clone())).unwrap();
            assert_feasible(&p);
            assert_eq!(p.argmax(), c, "{solver}");
            assert!(p[c] > 0.8, "{solver}: {:?}", &*p);
            assert_eq!(model.predict_class(&Features::Dense(x.clone())).unwrap(), c);
        }
    }
}

#[test]
fn threaded_training_is_identical() {
    let d = four_blobs(6);
    let a = greedy_orthogonal_dense(4, 2).unwrap();
    let seq = train_multiclass(&d, &a, SolverKind::OrthogonalFast).unwrap();
    let opts = TrainOptions {
        threads: 3,
        ..TrainOptions::default()
    };
    let par = train_multiclass_with(&d, &a, SolverKind::OrthogonalFast, &opts).unwrap();
    assert_eq!(seq, par);
}

#[test]
fn model_file_round_trip() {
    let d = four_blobs(7)
        .with_class_names(vec!["a".into(), "b".into(), "7".into(), "-1".into()])
        .unwrap();
    let model = train_multiclass(
        &d,
        &harmonic_matrix(4, 8).unwrap(),
        SolverKind::OrthogonalFast,
    );
    // the first harmonic row is all ones, so four classes on length 8 is not admissible
    assert!(model.is_err());
    let model = train_multiclass(
        &d,
        &greedy_orthogonal_dense(4, 3).unwrap(),
        SolverKind::OrthogonalFast,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.txt");
    model.save(&path).unwrap();
    let back = MulticlassModel::load(&path).unwrap();
    assert_eq!(back, model);
    assert_eq!(
        MulticlassModel::parse_text(&model.to_text()).unwrap(),
        model
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn outputs_are_feasible_and_solvers_agree(seed in any::<u64>()) {
        let d = four_blobs(seed);
        let a = greedy_orthogonal_dense(4, seed).unwrap();
        let fast = train_multiclass(&d, &a, SolverKind::OrthogonalFast).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let x = Features::Dense(common::uniform_vec(4, -2.0, 6.0, &mut rng));
            let r = fast.decisions(&x).unwrap();
            let p_fast = fast.decode(&r).unwrap();
            let p_lsq = ortho_ecoc::decode::decode(SolverKind::ConstrainedLsq, &a, &r).unwrap();
            assert_feasible(&p_fast);
            assert_feasible(&p_lsq);
            for (u, v) in p_fast.iter().zip(p_lsq.iter()) {
                prop_assert!((u - v).abs() <= 1e-8);
            }
            let mut p0 = unconstrained_orthogonal(&a, &r).unwrap();
            p0.sort_by(|x, y| y.total_cmp(x));
            if p0[0] - p0[1] > 1e-12 {
                let vote = ortho_ecoc::decode::vote(&a, &r).unwrap();
                prop_assert_eq!(vote, p_fast.argmax());
                let scaled: Vec<f64> = r.iter().map(|v| 2.0 * v).collect();
                prop_assert_eq!(ortho_ecoc::decode::vote(&a, &scaled).unwrap(), vote);
            }
        }
    }

    #[test]
    fn class_permutation_is_equivariant(seed in any::<u64>(), perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let d = four_blobs(seed);
        let a = one_vs_rest(4).unwrap();
        let mut inverse = vec![0; 4];
        for (c, &p) in perm.iter().enumerate() {
            inverse[p] = c;
        }
        let base = train_multiclass(&d, &a, SolverKind::ConstrainedLsq).unwrap();
        let moved = train_multiclass(
            &d.permute_classes(&perm).unwrap(),
            &a.permute_rows(&inverse).unwrap(),
            SolverKind::ConstrainedLsq,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..10 {
            let x = Features::Dense(common::uniform_vec(4, -2.0, 6.0, &mut rng));
            let p = base.predict_proba(&x).unwrap();
            let q = moved.predict_proba(&x).unwrap();
            for c in 0..4 {
                prop_assert!((p[c] - q[perm[c]]).abs() <= 1e-9, "{:?} vs {:?}", &*p, &*q);
            }
        }
    }
}

#[test]
fn vote_only_models_predict_without_probabilities() {
    let d = four_blobs(8);
    let a = greedy_orthogonal_dense(4, 4).unwrap();
    let model = train_multiclass(&d, &a, SolverKind::VoteOnly).unwrap();
    let x = Features::Dense(vec![0.0, 4.0, 0.0, 0.0]);
    assert_eq!(model.predict_class(&x).unwrap(), 1);
    assert!(matches!(
        model.predict_proba(&x),
        Err(Error::NoProbabilities)
    ));
}

#[test]
fn uniform_probabilities_pick_class_zero() {
    assert_eq!(ortho_ecoc::ProbabilityVector::uniform(5).argmax(), 0);
}
