//! Reduce 64-dimensional data that lives near a 3-D subspace with PCA, then
//! cluster the projection.

use ksplits::data::{generate_mixture, SyntheticSpec};
use ksplits::numerics::pca_fit_transform;
use ksplits::rng::SeededRng;
use ksplits::{adjusted_rand_index, ksplits_run, KSplitsConfig, Matrix};

fn main() -> ksplits::Result<()> {
    let latent_means = vec![
        vec![0.0, 0.0, 0.0],
        vec![20.0, 0.0, 0.0],
        vec![0.0, 20.0, 0.0],
        vec![0.0, 0.0, 20.0],
    ];
    let ds = generate_mixture(&SyntheticSpec::even(800, latent_means, 1.0, 5))?;

    // Embed with a random 64×3 linear map plus a little isotropic noise.
    let mut rng = SeededRng::new(9);
    let dim = 64;
    let map: Vec<f64> = (0..dim * 3)
        .map(|_| rng.normal(0.0, 1.0 / 3f64.sqrt()))
        .collect();
    let mut values = Vec::with_capacity(ds.data.rows() * dim);
    for row in ds.data.iter_rows() {
        for j in 0..dim {
            let v: f64 = (0..3).map(|t| map[j * 3 + t] * row[t]).sum();
            values.push(v + rng.normal(0.0, 0.1));
        }
    }
    let high = Matrix::new(ds.data.rows(), dim, values)?;

    let (projection, reduced) = pca_fit_transform(&high, 0.9)?;
    println!(
        "PCA kept {} of {dim} dimensions ({:.1}% of variance)",
        projection.components.len(),
        100.0 * projection.explained_fraction
    );

    let result = ksplits_run(&reduced, &KSplitsConfig::default())?;
    let ari = adjusted_rand_index(ds.truth.as_deref().unwrap(), &result.labels)?;
    println!("detected k = {}, ARI = {ari:.4}", result.final_k);
    Ok(())
}
