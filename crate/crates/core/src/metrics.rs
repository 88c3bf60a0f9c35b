//! External validity scores.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numerics::{squared_euclidean, Matrix};

fn pairs(n: u64) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

/// Adjusted Rand index between two partitions (Hubert–Arabie, permutation model).
///
/// With the contingency table `n_ij` (points labelled `i` in `a` and `j` in
/// `b`), row sums `a_i`, column sums `b_j` and `N` points:
///
/// ```text
/// index    = Σ_ij C(n_ij, 2)
/// expected = Σ_i C(a_i, 2) · Σ_j C(b_j, 2) / C(N, 2)
/// max      = (Σ_i C(a_i, 2) + Σ_j C(b_j, 2)) / 2
/// ARI      = (index − expected) / (max − expected)
/// ```
///
/// When `max == expected` (for example both partitions are a single block, or
/// both are all singletons) the ratio is undefined; the result is 1 if the
/// partitions are identical up to renaming and 0 otherwise.
///
/// Labels need not be contiguous.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::InvalidConfig(
            "adjusted Rand index needs at least two points".into(),
        ));
    }

    let mut table: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }

    let index: f64 = table.values().map(|&n| pairs(n)).sum();
    let sum_rows: f64 = rows.values().map(|&n| pairs(n)).sum();
    let sum_cols: f64 = cols.values().map(|&n| pairs(n)).sum();
    let total = pairs(a.len() as u64);

    let expected = sum_rows * sum_cols / total;
    let max = 0.5 * (sum_rows + sum_cols);
    if max == expected {
        // Identical up to renaming iff every row and column of the
        // contingency table has exactly one non-zero cell.
        let same = table.len() == rows.len() && table.len() == cols.len();
        return Ok(if same { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / (max - expected))
}

/// Sum of squared distances from each point to its assigned centroid.
pub fn sse(data: &Matrix, labels: &[usize], centroids: &[Vec<f64>]) -> Result<f64> {
    if labels.len() != data.rows() {
        return Err(Error::LengthMismatch {
            left: data.rows(),
            right: labels.len(),
        });
    }
    let mut total = 0.0;
    for (p, &l) in data.iter_rows().zip(labels) {
        let c = centroids.get(l).ok_or(Error::LabelOutOfRange {
            label: l,
            clusters: centroids.len(),
        })?;
        if c.len() != data.cols() {
            return Err(Error::DimensionMismatch {
                expected: data.cols(),
                actual: c.len(),
            });
        }
        total += squared_euclidean(p, c);
    }
    Ok(total)
}

/// Relabels to `0..m` in order of first appearance.
pub fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut map = BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}
