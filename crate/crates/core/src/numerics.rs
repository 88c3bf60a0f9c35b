//! Dense kernels used by the clustering code: means, covariance, the dominant
//! eigenpair, distances and PCA.
//!
//! Every reduction runs in a fixed sequential order so results are
//! bit-identical across runs and threads.

use crate::error::{Error, Result};

/// Row-major matrix, one point per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if cols == 0 {
            return Err(Error::InvalidMatrix(
                "matrix needs at least one column".into(),
            ));
        }
        if values.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite value at row {}, column {}",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols > 0);
        Self {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or(Error::EmptyData)?;
        let mut values = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, values)
    }

    /// Copies the listed rows into a new matrix.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut values = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.values[i * self.cols + j] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Applies `f` to every row, producing a matrix of the same shape.
    pub fn map_rows(&self, mut f: impl FnMut(&[f64], &mut [f64])) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for (src, dst) in self
            .values
            .chunks_exact(self.cols)
            .zip(out.values.chunks_exact_mut(self.cols))
        {
            f(src, dst);
        }
        out
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        self.iter_rows().map(|row| dot(row, v)).collect()
    }
}

/// Largest eigenvalue of a symmetric PSD matrix and a unit eigenvector for it.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(squared_euclidean(a, b).sqrt())
}

/// Column means of all rows.
pub fn centroid(points: &Matrix) -> Result<Vec<f64>> {
    if points.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let mut sum = vec![0.0; points.cols()];
    for row in points.iter_rows() {
        for (s, x) in sum.iter_mut().zip(row) {
            *s += x;
        }
    }
    let q = points.rows() as f64;
    Ok(sum.into_iter().map(|s| s / q).collect())
}

/// Column means of the rows listed in `members`.
pub(crate) fn centroid_of(data: &Matrix, members: &[usize]) -> Result<Vec<f64>> {
    if members.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let mut sum = vec![0.0; data.cols()];
    for &i in members {
        for (s, x) in sum.iter_mut().zip(data.row(i)) {
            *s += x;
        }
    }
    let q = members.len() as f64;
    Ok(sum.into_iter().map(|s| s / q).collect())
}

/// Population covariance `(1/Q) * Xcᵀ Xc` of the rows centered on `center`.
pub fn covariance(points: &Matrix, center: &[f64]) -> Result<Matrix> {
    let all: Vec<usize> = (0..points.rows()).collect();
    covariance_of(points, &all, center)
}

pub(crate) fn covariance_of(data: &Matrix, members: &[usize], center: &[f64]) -> Result<Matrix> {
    let n = data.cols();
    if center.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: center.len(),
        });
    }
    if members.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let mut upper = vec![0.0; n * n];
    let mut centered = vec![0.0; n];
    for &i in members {
        for ((c, x), m) in centered.iter_mut().zip(data.row(i)).zip(center) {
            *c = x - m;
        }
        for a in 0..n {
            let ca = centered[a];
            let row = &mut upper[a * n..(a + 1) * n];
            for b in a..n {
                row[b] += ca * centered[b];
            }
        }
    }
    let q = members.len() as f64;
    let mut cov = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = upper[a * n + b] / q;
            cov.set(a, b, v);
            cov.set(b, a, v);
        }
    }
    Ok(cov)
}

const SYMMETRY_TOL: f64 = 1e-9;
/// Largest dimension handled by the full Jacobi decomposition.
const DENSE_EIGEN_MAX_DIM: usize = 64;
const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERATIONS: usize = 5000;
const JACOBI_MAX_SWEEPS: usize = 100;

fn check_symmetric(sym: &Matrix) -> Result<()> {
    if sym.rows() != sym.cols() {
        return Err(Error::DimensionMismatch {
            expected: sym.cols(),
            actual: sym.rows(),
        });
    }
    let n = sym.rows();
    let scale = sym.as_slice().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((sym.get(i, j) - sym.get(j, i)).abs());
        }
    }
    if worst > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(worst));
    }
    Ok(())
}

/// Largest eigenpair of a symmetric positive semidefinite matrix.
///
/// Dimensions up to 64 use a full cyclic Jacobi decomposition; larger
/// matrices use [`power_iteration`]. The sign of the returned vector is
/// unspecified. A zero matrix yields value 0 and the normalized all-ones
/// vector.
pub fn dominant_eigenpair(sym: &Matrix) -> Result<EigenPair> {
    check_symmetric(sym)?;
    if sym.rows() <= DENSE_EIGEN_MAX_DIM {
        jacobi_dominant(sym)
    } else {
        power_iteration(sym)
    }
}

fn jacobi_dominant(sym: &Matrix) -> Result<EigenPair> {
    let (values, vectors) = jacobi_eigen(sym)?;
    let vector = vectors.into_iter().next().expect("n >= 1");
    Ok(EigenPair {
        value: values[0].max(0.0),
        vector,
    })
}

/// Power iteration from the normalized all-ones vector.
///
/// Stops when successive iterates differ by less than 1e-10 in 2-norm, with a
/// cap of 5000 steps. A second run starts from the canonical basis vector of
/// the largest diagonal entry and the larger Rayleigh quotient wins, so a
/// start orthogonal to the dominant axis is not trusted alone. A start that
/// the matrix annihilates is replaced by the next canonical basis vector. A
/// start that hits the cap with a residual `‖Av − λv‖` above
/// `1e-7·max(1, λ)` means the leading eigenvalues are too close for the
/// power method, and the answer comes from a full Jacobi decomposition
/// instead.
pub fn power_iteration(sym: &Matrix) -> Result<EigenPair> {
    check_symmetric(sym)?;
    let n = sym.rows();
    let heaviest = (0..n)
        .max_by(|&i, &j| sym.get(i, i).total_cmp(&sym.get(j, j)).then(j.cmp(&i)))
        .expect("n >= 1");
    let basis = |i: usize| {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        e
    };
    let starts = std::iter::once(vec![1.0 / (n as f64).sqrt(); n])
        .chain(std::iter::once(basis(heaviest)))
        .chain((0..n).filter(|&i| i != heaviest).map(basis));

    let mut best: Option<EigenPair> = None;
    let mut converged = 0;
    let mut annihilated = 0;
    for start in starts {
        match power_from(sym, start) {
            PowerOutcome::Converged(pair) => {
                converged += 1;
                if best.as_ref().is_none_or(|b| pair.value > b.value) {
                    best = Some(pair);
                }
                if converged == 2 {
                    break;
                }
            }
            PowerOutcome::Annihilated => annihilated += 1,
            PowerOutcome::Stalled => return jacobi_dominant(sym),
        }
    }
    if let Some(pair) = best {
        return Ok(pair);
    }
    if annihilated == n + 1 {
        // Every start maps to zero: the matrix is zero.
        return Ok(EigenPair {
            value: 0.0,
            vector: vec![1.0 / (n as f64).sqrt(); n],
        });
    }
    Err(Error::EigenNotConverged)
}

enum PowerOutcome {
    Converged(EigenPair),
    Annihilated,
    Stalled,
}

fn power_from(sym: &Matrix, start: Vec<f64>) -> PowerOutcome {
    let mut v = start;
    for _ in 0..POWER_MAX_ITERATIONS {
        let w = sym.mat_vec(&v);
        let len = norm(&w);
        if len == 0.0 {
            return PowerOutcome::Annihilated;
        }
        let next: Vec<f64> = w.iter().map(|x| x / len).collect();
        let change = squared_euclidean(&next, &v).sqrt();
        v = next;
        if change < POWER_TOL {
            let value = dot(&v, &sym.mat_vec(&v)).max(0.0);
            return PowerOutcome::Converged(EigenPair { value, vector: v });
        }
    }
    let av = sym.mat_vec(&v);
    let value = dot(&v, &av).max(0.0);
    let residual = av
        .iter()
        .zip(&v)
        .map(|(a, x)| (a - value * x).powi(2))
        .sum::<f64>()
        .sqrt();
    if residual <= 1e-7 * value.max(1.0) {
        PowerOutcome::Converged(EigenPair { value, vector: v })
    } else {
        PowerOutcome::Stalled
    }
}

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching unit
/// eigenvectors.
pub(crate) fn jacobi_eigen(sym: &Matrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = sym.rows();
    let mut a: Vec<f64> = sym.as_slice().to_vec();
    // v is stored row-major; column j is the j-th eigenvector.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum();

    let mut converged = n == 1;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off == 0.0 || off <= 1e-30 * total {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenNotConverged);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let col: Vec<f64> = (0..n).map(|k| v[k * n + j]).collect();
            let len = norm(&col);
            col.into_iter().map(|x| x / len).collect()
        })
        .collect();
    Ok((values, vectors))
}

/// A fitted PCA basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaProjection {
    pub mean: Vec<f64>,
    /// Orthonormal principal axes, largest variance first.
    pub components: Vec<Vec<f64>>,
    /// Fraction of total variance captured by `components`.
    pub explained_fraction: f64,
}

impl PcaProjection {
    pub fn transform(&self, data: &Matrix) -> Result<Matrix> {
        if data.cols() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                actual: data.cols(),
            });
        }
        let m = self.components.len();
        let mut out = Matrix::zeros(data.rows(), m);
        let mut centered = vec![0.0; data.cols()];
        for (i, row) in data.iter_rows().enumerate() {
            for ((c, x), mu) in centered.iter_mut().zip(row).zip(&self.mean) {
                *c = x - mu;
            }
            for (j, axis) in self.components.iter().enumerate() {
                out.set(i, j, dot(&centered, axis));
            }
        }
        Ok(out)
    }

    /// Maps projected coordinates back to the original space.
    pub fn inverse_transform(&self, projected: &Matrix) -> Result<Matrix> {
        if projected.cols() != self.components.len() {
            return Err(Error::DimensionMismatch {
                expected: self.components.len(),
                actual: projected.cols(),
            });
        }
        let n = self.mean.len();
        let mut out = Matrix::zeros(projected.rows(), n);
        for (i, row) in projected.iter_rows().enumerate() {
            for j in 0..n {
                let v = self.mean[j]
                    + row
                        .iter()
                        .zip(&self.components)
                        .map(|(w, axis)| w * axis[j])
                        .sum::<f64>();
                out.set(i, j, v);
            }
        }
        Ok(out)
    }
}

/// Keeps the smallest number of principal components whose cumulative
/// variance reaches `variance_fraction`, and projects the centered data onto
/// them.
pub fn pca_fit_transform(data: &Matrix, variance_fraction: f64) -> Result<(PcaProjection, Matrix)> {
    if !(variance_fraction > 0.0 && variance_fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "variance fraction {variance_fraction} outside (0, 1]"
        )));
    }
    if data.rows() < 2 {
        return Err(Error::InvalidConfig("PCA needs at least two rows".into()));
    }
    let mean = centroid(data)?;
    let cov = covariance(data, &mean)?;
    let (values, vectors) = jacobi_eigen(&cov)?;
    let values: Vec<f64> = values.into_iter().map(|v| v.max(0.0)).collect();
    let total: f64 = values.iter().sum();

    let mut kept = values.len();
    let mut explained = 1.0;
    if total > 0.0 {
        let mut cumulative = 0.0;
        for (i, v) in values.iter().enumerate() {
            cumulative += v;
            // Relative slack so a full-variance request is not defeated by rounding.
            if cumulative / total >= variance_fraction - 1e-12 {
                kept = i + 1;
                explained = (cumulative / total).min(1.0);
                break;
            }
        }
    } else {
        kept = 1;
    }

    let projection = PcaProjection {
        mean,
        components: vectors.into_iter().take(kept).collect(),
        explained_fraction: explained,
    };
    let projected = projection.transform(data)?;
    Ok((projection, projected))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn centroid_midpoint_and_single_point() {
        assert_eq!(
            centroid(&m(&[&[0.0, 0.0], &[2.0, 0.0]])).unwrap(),
            vec![1.0, 0.0]
        );
        assert_eq!(centroid(&m(&[&[5.0, 5.0]])).unwrap(), vec![5.0, 5.0]);
    }

    #[test]
    fn centroid_of_nothing_is_an_error() {
        let empty = Matrix::new(0, 2, vec![]).unwrap();
        assert!(matches!(centroid(&empty), Err(Error::EmptyCluster)));
    }

    #[test]
    fn covariance_uses_population_divisor() {
        let c = covariance(&m(&[&[0.0, 0.0], &[2.0, 0.0]]), &[1.0, 0.0]).unwrap();
        assert_eq!(c.as_slice(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn covariance_of_repeated_point_is_zero() {
        let pts = Matrix::from_rows(&[[3.0, -1.0, 2.0]; 6]).unwrap();
        let c = covariance(&pts, &centroid(&pts).unwrap()).unwrap();
        assert!(c.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn covariance_rejects_center_of_wrong_length() {
        let pts = m(&[&[0.0, 0.0]]);
        assert!(matches!(
            covariance(&pts, &[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn diagonal_eigenpair() {
        let e = dominant_eigenpair(&m(&[&[2.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);
        assert!((e.vector[0].abs() - 1.0).abs() < 1e-12);
        assert!(e.vector[1].abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_has_zero_eigenvalue() {
        let z = Matrix::zeros(3, 3);
        let e = dominant_eigenpair(&z).unwrap();
        assert_eq!(e.value, 0.0);
        assert!((norm(&e.vector) - 1.0).abs() < 1e-12);
        let p = power_iteration(&z).unwrap();
        assert_eq!(p.value, 0.0);
        assert!((norm(&p.vector) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_symmetric_input_is_rejected() {
        let a = m(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(
            dominant_eigenpair(&a),
            Err(Error::NotSymmetric(_))
        ));
        assert!(matches!(power_iteration(&a), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn power_iteration_escapes_orthogonal_start() {
        // All-ones is an eigenvector for the smaller eigenvalue 1; the
        // dominant axis (1, -1)/√2 is orthogonal to it.
        let a = m(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let e = power_iteration(&a).unwrap();
        assert!((e.value - 3.0).abs() < 1e-9, "{}", e.value);
        assert!((e.vector[0] + e.vector[1]).abs() < 1e-9);
    }

    #[test]
    fn power_iteration_annihilated_start_falls_back() {
        // all-ones is in the null space; e_1 is not.
        let a = m(&[&[1.0, -1.0], &[-1.0, 1.0]]);
        let e = power_iteration(&a).unwrap();
        assert!((e.value - 2.0).abs() < 1e-9);
        assert!((e.vector[0] + e.vector[1]).abs() < 1e-9);
    }

    #[test]
    fn power_iteration_near_tie_uses_dense_solver() {
        // Leading eigenvalues 1 and 1 - 1e-6: the power method cannot
        // separate them within the iteration cap.
        let n = 3;
        let mut a = Matrix::zeros(n, n);
        a.set(0, 0, 1.0 - 1e-6);
        a.set(1, 1, 1.0);
        a.set(2, 2, 0.5);
        let e = power_iteration(&a).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
        assert!((e.vector[1].abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn euclidean_basics() {
        assert_eq!(euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(euclidean(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert!(euclidean(&[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn pca_on_a_line_keeps_one_component() {
        let pts: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![i as f64, 2.0 * i as f64 + 1.0])
            .collect();
        let (proj, out) = pca_fit_transform(&Matrix::from_rows(&pts).unwrap(), 0.9).unwrap();
        assert_eq!(proj.components.len(), 1);
        assert_eq!(out.cols(), 1);
        assert!(proj.explained_fraction >= 0.9);
    }

    #[test]
    fn pca_rejects_bad_fraction() {
        let pts = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(pca_fit_transform(&pts, 0.0).is_err());
        assert!(pca_fit_transform(&pts, 1.5).is_err());
    }

    #[test]
    fn matrix_rejects_non_finite() {
        assert!(Matrix::new(1, 2, vec![0.0, f64::NAN]).is_err());
        assert!(Matrix::new(1, 2, vec![0.0]).is_err());
        assert!(Matrix::new(0, 0, vec![]).is_err());
    }
}
