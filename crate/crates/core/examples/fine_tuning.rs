//! Raw k-splits labels versus labels after the k-means fine-tuning pass.

use ksplits::splits::fine_tune;
use ksplits::suites::a1;
use ksplits::{adjusted_rand_index, ksplits_run, KSplitsConfig};

fn main() -> ksplits::Result<()> {
    for seed in 0..3 {
        let ds = a1(seed)?;
        let truth = ds.truth.as_deref().unwrap();
        let config = KSplitsConfig {
            fine_tune: false,
            ..KSplitsConfig::default()
        };
        let raw = ksplits_run(&ds.data, &config)?;
        let tuned = fine_tune(&ds.data, &raw.centroids)?;
        println!(
            "seed {seed}: k = {:2}  raw ARI = {:.4}  fine-tuned ARI = {:.4}  ({} k-means iterations)",
            raw.final_k,
            adjusted_rand_index(truth, &raw.labels)?,
            adjusted_rand_index(truth, &tuned.labels)?,
            tuned.iterations
        );
    }
    Ok(())
}
