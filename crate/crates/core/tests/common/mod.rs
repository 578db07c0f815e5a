//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::path::PathBuf;

use ortho_ecoc::codes::greedy_orthogonal_dense;
use ortho_ecoc::learners::{Dataset, Features, Sample};
use ortho_ecoc::{CodingMatrix, MatrixKind};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Sylvester Hadamard entry of order `2^t`: `(-1)^popcount(i & j)`.
fn sylvester(i: usize, j: usize) -> i8 {
    if (i & j).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `m` distinct rows of the order-16 Sylvester matrix with shuffled columns
/// and random row and column signs. Rows stay orthogonal; columns may be
/// constant.
pub fn hadamard_rows(m: usize, rng: &mut ChaCha8Rng) -> CodingMatrix {
    assert!((1..=16).contains(&m));
    let mut picks: Vec<usize> = (0..16).collect();
    picks.shuffle(rng);
    let mut cols: Vec<usize> = (0..16).collect();
    cols.shuffle(rng);
    let col_sign: Vec<i8> = (0..16).map(|_| if rng.gen() { 1 } else { -1 }).collect();
    let rows: Vec<Vec<i8>> = picks[..m]
        .iter()
        .map(|&i| {
            let s: i8 = if rng.gen() { 1 } else { -1 };
            cols.iter()
                .zip(&col_sign)
                .map(|(&j, &c)| s * c * sylvester(i, j))
                .collect()
        })
        .collect();
    CodingMatrix::from_rows(&rows, MatrixKind::Custom).unwrap()
}

/// Dense orthogonal matrix for `m` classes: the greedy search for
/// `m >= 4` half of the time, otherwise Hadamard rows.
pub fn dense_orthogonal(m: usize, rng: &mut ChaCha8Rng) -> CodingMatrix {
    if m >= 4 && rng.gen::<bool>() {
        greedy_orthogonal_dense(m, rng.gen()).unwrap()
    } else {
        hadamard_rows(m, rng)
    }
}

pub fn uniform_vec(n: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// Standard normal draw by Box-Muller.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

/// `per_class` points around each of `centers` with unit-variance noise
/// scaled by `spread`.
pub fn blobs(centers: &[Vec<f64>], per_class: usize, spread: f64, rng: &mut ChaCha8Rng) -> Dataset {
    let d = centers[0].len();
    let mut samples = Vec::new();
    for (label, c) in centers.iter().enumerate() {
        for _ in 0..per_class {
            let x = c.iter().map(|&ci| ci + spread * normal(rng)).collect();
            samples.push(Sample {
                features: Features::Dense(x),
                label,
            });
        }
    }
    Dataset::new(samples, d, centers.len()).unwrap()
}

/// Centers on the coordinate axes of `m` dimensions, `dist` from the origin.
pub fn axis_centers(m: usize, dist: f64) -> Vec<Vec<f64>> {
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { dist } else { 0.0 }).collect())
        .collect()
}
