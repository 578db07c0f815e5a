use ortho_ecoc::codes::{
    dense_code_length, greedy_orthogonal_dense, harmonic_matrix, one_vs_one, one_vs_rest,
    orthogonal_with_zeros, prune_columns, random_dense, type2_params, Type2Params,
};
use ortho_ecoc::{validate, CodingMatrix, MatrixKind};
use proptest::prelude::*;

fn assert_gram_is_n_identity(a: &CodingMatrix) {
    let n = a.n_codes() as i64;
    for (i, row) in a.gram().iter().enumerate() {
        for (k, &g) in row.iter().enumerate() {
            assert_eq!(g, if i == k { n } else { 0 }, "gram[{i}][{k}]");
        }
    }
}

fn assert_admissible(a: &CodingMatrix) {
    let r = validate(a);
    assert!(r.mixed_sign_columns, "{r}");
    assert!(r.constant_columns.is_empty(), "{r}");
    assert!(r.duplicate_columns.is_empty(), "{r}");
    assert!(r.zero_rows.is_empty(), "{r}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greedy_dense_is_orthogonal_and_admissible(m in 4usize..=12, seed in any::<u64>()) {
        let a = greedy_orthogonal_dense(m, seed).unwrap();
        prop_assert_eq!(a.n_classes(), m);
        prop_assert_eq!(a.n_codes(), dense_code_length(m));
        prop_assert_eq!(a.kind(), MatrixKind::OrthogonalDense);
        prop_assert!(a.is_dense_orthogonal());
        assert_gram_is_n_identity(&a);
        assert_admissible(&a);
    }

    #[test]
    fn harmonic_rows_are_orthogonal(t in 1u32..=6, frac in 0.0f64..1.0) {
        let n = 1usize << t;
        let bound = 2 * t as usize;
        let m = 1 + ((bound as f64 * frac) as usize).min(bound - 1);
        let a = harmonic_matrix(m, n).unwrap();
        prop_assert!(a.is_dense_orthogonal());
        assert_gram_is_n_identity(&a);
    }

    #[test]
    fn zeros_search_keeps_row_weight_and_orthogonality(m in 2usize..=10, seed in any::<u64>()) {
        let params = type2_params(m).unwrap();
        let s = orthogonal_with_zeros(params, seed).unwrap();
        let u = &s.unpruned;
        prop_assert_eq!(u.n_codes(), params.initial_codes());
        for i in 0..m {
            let weight = u.row(i).iter().filter(|&&v| v != 0).count();
            prop_assert_eq!(weight, params.row_nonzeros());
            for k in 0..i {
                prop_assert_eq!(u.row_dot(i, k), 0);
            }
        }
        prop_assert!(s.matrix.n_codes() <= params.initial_codes());
        for (out, &j) in s.pruned.kept.iter().enumerate() {
            prop_assert_eq!(s.matrix.column(out), u.column(j));
        }
        assert_admissible(&s.matrix);
    }

    #[test]
    fn random_dense_is_admissible(m in 2usize..=12, extra in 0usize..8, seed in any::<u64>()) {
        let n = (dense_code_length(m) + extra).min((1 << (m - 1)) - 1);
        let a = random_dense(m, n, seed).unwrap();
        prop_assert_eq!((a.n_classes(), a.n_codes()), (m, n));
        prop_assert!(a.rows().all(|r| r.iter().all(|&v| v != 0)));
        assert_admissible(&a);
    }

    #[test]
    fn generators_are_deterministic(m in 4usize..=10, seed in any::<u64>()) {
        prop_assert_eq!(greedy_orthogonal_dense(m, seed).unwrap(), greedy_orthogonal_dense(m, seed).unwrap());
        prop_assert_eq!(random_dense(m, m + 2, seed).unwrap(), random_dense(m, m + 2, seed).unwrap());
        let p = type2_params(m).unwrap();
        let (a, b) = (orthogonal_with_zeros(p, seed).unwrap(), orthogonal_with_zeros(p, seed).unwrap());
        prop_assert_eq!(a.unpruned, b.unpruned);
        prop_assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn pruning_leaves_only_admissible_columns(
        rows in prop::collection::vec(prop::collection::vec(-1i8..=1, 9), 2..6)
    ) {
        let a = CodingMatrix::from_rows(&rows, MatrixKind::Custom).unwrap();
        let p = prune_columns(&a);
        prop_assert_eq!(p.kept.len() + p.removed().len(), a.n_codes());
        if !p.kept.is_empty() {
            let r = validate(&a.select_columns(&p.kept).unwrap());
            prop_assert!(r.mixed_sign_columns);
            prop_assert!(r.duplicate_columns.is_empty());
        }
    }

    #[test]
    fn matrix_text_round_trips(
        rows in prop::collection::vec(prop::collection::vec(-1i8..=1, 7), 1..8)
    ) {
        let a = CodingMatrix::from_rows(&rows, MatrixKind::Custom).unwrap();
        prop_assert_eq!(CodingMatrix::parse_text(&a.to_text()).unwrap(), a);
    }
}

#[test]
fn greedy_dense_twenty_seeds_per_size() {
    for m in 4..=12 {
        for seed in 0..20 {
            let a = greedy_orthogonal_dense(m, seed).unwrap();
            assert_gram_is_n_identity(&a);
            assert_admissible(&a);
        }
    }
}

#[test]
fn greedy_dense_has_no_two_or_three_class_matrix() {
    assert!(greedy_orthogonal_dense(2, 0).is_err());
    assert!(greedy_orthogonal_dense(3, 0).is_err());
}

#[test]
fn pairwise_families_have_expected_shape() {
    for m in 2..=9 {
        let a = one_vs_one(m).unwrap();
        assert_eq!(a.n_codes(), m * (m - 1) / 2);
        for j in 0..a.n_codes() {
            let c = a.column(j);
            assert_eq!(c.iter().filter(|&&v| v == 1).count(), 1);
            assert_eq!(c.iter().filter(|&&v| v == -1).count(), 1);
        }
        assert_admissible(&a);

        let b = one_vs_rest(m).unwrap();
        assert_eq!(b.n_codes(), m);
        for j in 0..m {
            for i in 0..m {
                assert_eq!(b.get(i, j), if i == j { 1 } else { -1 });
            }
        }
    }
}

#[test]
fn table_parameters() {
    let expect = [
        (4, 7, 4),
        (6, 12, 6),
        (7, 15, 7),
        (8, 17, 8),
        (9, 20, 9),
        (10, 23, 10),
        (5, 12, 5),
    ];
    for (m, n0, k) in expect {
        let p = type2_params(m).unwrap();
        assert_eq!(
            (p.n_classes(), p.initial_codes(), p.row_nonzeros()),
            (m, n0, k)
        );
    }
    assert!(type2_params(1).is_err());
    assert!(Type2Params::new(4, 3, 2).is_err());
    assert!(Type2Params::new(4, 7, 8).is_err());
}

#[test]
fn six_class_zeros_matrix_drops_redundant_columns() {
    let p = type2_params(6).unwrap();
    let mut pruned_any = false;
    for seed in 0..10 {
        let s = orthogonal_with_zeros(p, seed).unwrap();
        assert!(s.matrix.n_codes() <= 12);
        pruned_any |= s.matrix.n_codes() < 12;
    }
    assert!(pruned_any);
}

#[test]
fn two_by_two_zeros_search_finds_hadamard() {
    let s = orthogonal_with_zeros(Type2Params::new(2, 2, 2).unwrap(), 3).unwrap();
    let u = &s.unpruned;
    assert_eq!(u.gram(), vec![vec![2, 0], vec![0, 2]]);
}
