//! Best-of-ten random-init k-means with the true k, next to k-splits which
//! has to find k itself.

use ksplits::suites::{kmeans_best_of, s1};
use ksplits::{adjusted_rand_index, ksplits_run, KSplitsConfig};

fn main() -> ksplits::Result<()> {
    let ds = s1(2)?;
    let truth = ds.truth.as_deref().unwrap();
    let c = ds.clusters().unwrap();

    let (best, seed, time) = kmeans_best_of(&ds.data, c, 10, 0)?;
    println!(
        "kmeans-10R  k = {c}  ARI = {:.4}  SSE = {:.1}  best seed {seed}  {time:.3} s",
        adjusted_rand_index(truth, &best.labels)?,
        best.sse
    );

    let ks = ksplits_run(&ds.data, &KSplitsConfig::default())?;
    println!(
        "k-splits    k = {}  ARI = {:.4}  {:.3} s",
        ks.final_k,
        adjusted_rand_index(truth, &ks.labels)?,
        ks.wall_time
    );
    Ok(())
}
