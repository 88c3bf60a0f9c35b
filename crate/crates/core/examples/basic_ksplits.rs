//! Discover the number of clusters in a three-blob dataset.

use ksplits::data::{generate_mixture, SyntheticSpec};
use ksplits::{adjusted_rand_index, ksplits_run, KSplitsConfig};

fn main() -> ksplits::Result<()> {
    let means = vec![vec![0.0, 0.0], vec![30.0, 0.0], vec![15.0, 25.0]];
    let ds = generate_mixture(&SyntheticSpec::even(900, means, 2.0, 1))?;

    let result = ksplits_run(&ds.data, &KSplitsConfig::default())?;
    println!("detected k = {} ({:?})", result.final_k, result.termination);
    println!("d_base = {:.3}", result.d_base);
    for (i, snap) in result.trace.iter().enumerate() {
        let mark = if i == result.selected_iteration {
            "*"
        } else {
            " "
        };
        println!(
            "{mark} k={:<3} J_k={:<12} d/d_base={}",
            snap.k,
            snap.j_k.map_or("-".into(), |j| format!("{j:.4}")),
            snap.ratio.map_or("-".into(), |r| format!("{r:.4}")),
        );
    }
    for c in &result.centroids {
        println!("centroid ({:.2}, {:.2})", c[0], c[1]);
    }
    let ari = adjusted_rand_index(ds.truth.as_deref().unwrap(), &result.labels)?;
    println!("ARI vs truth = {ari:.4}");
    Ok(())
}
