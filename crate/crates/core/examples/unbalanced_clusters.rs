//! Three large dense clusters next to five small sparse ones. The split
//! priority saturates with cluster size, so the big clusters do not soak up
//! every split.

use ksplits::suites::{unbalance, BETA_SPARSE};
use ksplits::{adjusted_rand_index, ksplits_run, KSplitsConfig};

fn main() -> ksplits::Result<()> {
    let ds = unbalance(0)?;
    let truth = ds.truth.as_deref().unwrap();

    let result = ksplits_run(&ds.data, &KSplitsConfig::with_beta(BETA_SPARSE))?;
    println!(
        "{}: {} points, true C = {}, detected k = {}",
        ds.name,
        ds.data.rows(),
        ds.clusters().unwrap(),
        result.final_k
    );
    println!(
        "splits tried: {}, selected iteration {} by J_k",
        result.trace.len(),
        result.selected_iteration
    );
    let mut sizes = vec![0usize; result.final_k];
    for &l in &result.labels {
        sizes[l] += 1;
    }
    println!("cluster sizes: {sizes:?}");
    println!("ARI = {:.4}", adjusted_rand_index(truth, &result.labels)?);
    Ok(())
}
