mod common;

use common::{eigen_oracle, random_psd, random_rotation, rotate};
use ksplits::numerics::{
    centroid, covariance, dominant_eigenpair, dot, euclidean, norm, pca_fit_transform,
    power_iteration,
};
use ksplits::rng::SeededRng;
use ksplits::Matrix;
use proptest::prelude::*;

fn random_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix {
    let values = (0..rows * cols)
        .map(|_| rng.uniform_range(-10.0, 10.0))
        .collect();
    Matrix::new(rows, cols, values).unwrap()
}

fn residual(sym: &Matrix, value: f64, vector: &[f64]) -> f64 {
    let av = sym.mat_vec(vector);
    av.iter()
        .zip(vector)
        .map(|(a, v)| (a - value * v).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[test]
fn centroid_examples() {
    let m = Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
    assert_eq!(centroid(&m).unwrap(), vec![1.0, 0.0]);
    let single = Matrix::from_rows(&[[5.0, 5.0]]).unwrap();
    assert_eq!(centroid(&single).unwrap(), vec![5.0, 5.0]);
    assert!(centroid(&Matrix::zeros(0, 2)).is_err());
}

#[test]
fn centroid_matches_naive_column_sums() {
    let mut rng = SeededRng::new(1);
    let m = random_matrix(100, 4, &mut rng);
    let c = centroid(&m).unwrap();
    for (j, cj) in c.iter().enumerate() {
        let mut sum = 0.0;
        for i in 0..100 {
            sum += m.get(i, j);
        }
        assert!((cj - sum / 100.0).abs() < 1e-12);
    }
}

#[test]
fn covariance_examples() {
    let m = Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
    let cov = covariance(&m, &[1.0, 0.0]).unwrap();
    assert_eq!(cov.as_slice(), &[1.0, 0.0, 0.0, 0.0]);

    let copies = Matrix::from_rows(&[[3.0, -1.0, 2.0]; 6]).unwrap();
    let cov = covariance(&copies, &centroid(&copies).unwrap()).unwrap();
    assert!(cov.as_slice().iter().all(|&v| v == 0.0));

    assert!(covariance(&m, &[1.0]).is_err());
}

#[test]
fn covariance_is_symmetric_psd_against_oracle() {
    let mut rng = SeededRng::new(2);
    for _ in 0..20 {
        let m = random_matrix(50, 3, &mut rng);
        let cov = covariance(&m, &centroid(&m).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((cov.get(i, j) - cov.get(j, i)).abs() <= 1e-12);
            }
        }
        let (values, _) = eigen_oracle(&cov);
        assert!(values.iter().all(|&v| v >= -1e-10), "{values:?}");
        assert!(values[2] >= -1e-9 * values[0]);
    }
}

#[test]
fn dominant_eigenpair_examples() {
    let d = Matrix::from_rows(&[[2.0, 0.0], [0.0, 1.0]]).unwrap();
    let e = dominant_eigenpair(&d).unwrap();
    assert_eq!(e.value, 2.0);
    assert!((e.vector[0].abs() - 1.0).abs() < 1e-12);

    let z = Matrix::zeros(4, 4);
    let e = dominant_eigenpair(&z).unwrap();
    assert_eq!(e.value, 0.0);
    assert!((norm(&e.vector) - 1.0).abs() < 1e-9);

    let skew = Matrix::from_rows(&[[1.0, 0.5], [0.0, 1.0]]).unwrap();
    assert!(dominant_eigenpair(&skew).is_err());
}

#[test]
fn dominant_eigenpair_matches_oracle_on_spd() {
    let mut rng = SeededRng::new(3);
    for _ in 0..25 {
        let s = random_psd(8, &mut rng);
        let e = dominant_eigenpair(&s).unwrap();
        let (values, vectors) = eigen_oracle(&s);
        assert!((e.value - values[0]).abs() <= 1e-8);
        assert!(dot(&e.vector, &vectors[0]).abs() >= 1.0 - 1e-8);
        assert!((norm(&e.vector) - 1.0).abs() <= 1e-9);
        assert!(residual(&s, e.value, &e.vector) <= 1e-7 * e.value.max(1.0));
    }
}

#[test]
fn large_matrices_use_the_iterative_path() {
    // 80 > the dense cutoff; compare against the oracle anyway.
    let mut rng = SeededRng::new(4);
    for _ in 0..3 {
        let s = random_psd(80, &mut rng);
        let e = dominant_eigenpair(&s).unwrap();
        let (values, vectors) = eigen_oracle(&s);
        assert!((e.value - values[0]).abs() <= 1e-8 * values[0].max(1.0));
        assert!(dot(&e.vector, &vectors[0]).abs() >= 1.0 - 1e-8);
        assert!(residual(&s, e.value, &e.vector) <= 1e-7 * e.value.max(1.0));
    }
}

#[test]
fn power_iteration_handles_isotropic_spectrum() {
    // Identity plus a tiny perturbation: top two eigenvalues nearly tie.
    let n = 70;
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        s.set(i, i, 1.0 + 1e-9 * i as f64);
    }
    let e = power_iteration(&s).unwrap();
    assert!((e.value - (1.0 + 1e-9 * (n - 1) as f64)).abs() < 1e-12);
    assert!(residual(&s, e.value, &e.vector) <= 1e-7);
}

#[test]
fn euclidean_matches_naive_loop() {
    let mut rng = SeededRng::new(5);
    for _ in 0..50 {
        let a: Vec<f64> = (0..7).map(|_| rng.uniform_range(-5.0, 5.0)).collect();
        let b: Vec<f64> = (0..7).map(|_| rng.uniform_range(-5.0, 5.0)).collect();
        let mut s = 0.0;
        for i in 0..7 {
            s += (a[i] - b[i]) * (a[i] - b[i]);
        }
        let d = euclidean(&a, &b).unwrap();
        assert!((d - s.sqrt()).abs() < 1e-12);
        assert_eq!(d, euclidean(&b, &a).unwrap());
    }
}

#[test]
fn pca_component_count_matches_sorted_eigenvalue_prefix() {
    let mut rng = SeededRng::new(6);
    for _ in 0..20 {
        let m = random_matrix(20, 10, &mut rng);
        let (proj, out) = pca_fit_transform(&m, 0.9).unwrap();
        let cov = covariance(&m, &centroid(&m).unwrap()).unwrap();
        let (values, _) = eigen_oracle(&cov);
        let total: f64 = values.iter().sum();
        let mut cumulative = 0.0;
        let mut expected = values.len();
        for (i, v) in values.iter().enumerate() {
            cumulative += v;
            if cumulative / total >= 0.9 {
                expected = i + 1;
                break;
            }
        }
        assert_eq!(proj.components.len(), expected);
        assert_eq!(out.cols(), expected);
        assert!(proj.explained_fraction >= 0.9 - 1e-12);
        for (i, a) in proj.components.iter().enumerate() {
            for (j, b) in proj.components.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((dot(a, b) - target).abs() <= 1e-8);
            }
        }
    }
}

#[test]
fn pca_full_variance_reconstructs() {
    let mut rng = SeededRng::new(7);
    let m = random_matrix(30, 5, &mut rng);
    let (proj, out) = pca_fit_transform(&m, 1.0).unwrap();
    assert_eq!(proj.components.len(), 5);
    let back = proj.inverse_transform(&out).unwrap();
    for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
        assert!((a - b).abs() <= 1e-8);
    }
}

#[test]
fn pca_rejects_bad_fraction() {
    let m = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]]).unwrap();
    assert!(pca_fit_transform(&m, 0.0).is_err());
    assert!(pca_fit_transform(&m, 1.5).is_err());
}

fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-50.0f64..50.0, rows * cols)
        .prop_map(move |v| Matrix::new(rows, cols, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lambda1_is_rotation_invariant(m in matrix_strategy(25, 4), seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let r = random_rotation(4, &mut rng);
        let rotated = rotate(&m, &r);
        let l1 = dominant_eigenpair(&covariance(&m, &centroid(&m).unwrap()).unwrap()).unwrap().value;
        let l2 = dominant_eigenpair(&covariance(&rotated, &centroid(&rotated).unwrap()).unwrap()).unwrap().value;
        prop_assert!((l1 - l2).abs() <= 1e-8 * l1.max(1.0), "{} vs {}", l1, l2);
    }

    #[test]
    fn full_pca_preserves_distances(m in matrix_strategy(12, 3)) {
        let (_, out) = pca_fit_transform(&m, 1.0).unwrap();
        prop_assume!(out.cols() == 3);
        for i in 0..m.rows() {
            for j in i + 1..m.rows() {
                let before = euclidean(m.row(i), m.row(j)).unwrap();
                let after = euclidean(out.row(i), out.row(j)).unwrap();
                prop_assert!((before - after).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn covariance_always_psd(m in matrix_strategy(15, 5)) {
        let cov = covariance(&m, &centroid(&m).unwrap()).unwrap();
        let (values, _) = eigen_oracle(&cov);
        prop_assert!(values[4] >= -1e-9 * values[0].max(1e-300));
    }
}
