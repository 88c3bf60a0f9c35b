//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use ksplits::rng::SeededRng;
use ksplits::Matrix;
use nalgebra::{DMatrix, SymmetricEigen};

/// Adjusted Rand index by counting agreeing point pairs directly.
pub fn ari_pair_counting(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut neither) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => both += 1.0,
                (true, false) => only_a += 1.0,
                (false, true) => only_b += 1.0,
                (false, false) => neither += 1.0,
            }
        }
    }
    let total = both + only_a + only_b + neither;
    let same_a = both + only_a;
    let same_b = both + only_b;
    let expected = same_a * same_b / total;
    let max = 0.5 * (same_a + same_b);
    if max == expected {
        return if only_a == 0.0 && only_b == 0.0 {
            1.0
        } else {
            0.0
        };
    }
    (both - expected) / (max - expected)
}

pub fn to_nalgebra(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// Eigenvalues in descending order with matching unit eigenvectors.
pub fn eigen_oracle(m: &Matrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let eig = SymmetricEigen::new(to_nalgebra(m));
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    (values, vectors)
}

/// `AᵀA / n` for a random `n×n` matrix `A`: symmetric positive semidefinite.
pub fn random_psd(n: usize, rng: &mut SeededRng) -> Matrix {
    let a = DMatrix::from_fn(n, n, |_, _| rng.uniform_range(-1.0, 1.0));
    let s = a.transpose() * &a / n as f64;
    let s = (&s + s.transpose()) * 0.5;
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, s[(i, j)]);
        }
    }
    out
}

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
pub fn random_rotation(n: usize, rng: &mut SeededRng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.standard_normal());
    g.qr().q()
}

pub fn rotate(data: &Matrix, r: &DMatrix<f64>) -> Matrix {
    let rotated = to_nalgebra(data) * r.transpose();
    let rows: Vec<Vec<f64>> = rotated
        .row_iter()
        .map(|row| row.iter().copied().collect())
        .collect();
    Matrix::from_rows(&rows).unwrap()
}

pub fn random_labels(n: usize, blocks: usize, rng: &mut SeededRng) -> Vec<usize> {
    (0..n).map(|_| rng.below(blocks as u64) as usize).collect()
}

/// Same partition, possibly different label names.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && ksplits::metrics::canonical_labels(a) == ksplits::metrics::canonical_labels(b)
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut out = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && values[order[end + 1]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end) as f64 / 2.0 + 1.0;
        for &i in &order[start..=end] {
            out[i] = rank;
        }
        start = end + 1;
    }
    out
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

pub fn blobs(
    means: &[Vec<f64>],
    per_cluster: usize,
    std: f64,
    seed: u64,
) -> ksplits::data::LabeledDataset {
    let spec =
        ksplits::data::SyntheticSpec::even(per_cluster * means.len(), means.to_vec(), std, seed);
    ksplits::data::generate_mixture(&spec).unwrap()
}
