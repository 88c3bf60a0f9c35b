//! How β and best-iteration selection change the detected cluster count.

use ksplits::suites::s1;
use ksplits::{adjusted_rand_index, ksplits_run, KSplitsConfig};

fn main() -> ksplits::Result<()> {
    let ds = s1(0)?;
    let truth = ds.truth.as_deref().unwrap();
    println!("{} with {} true clusters", ds.name, ds.clusters().unwrap());
    println!(
        "{:>6}  {:>10}  {:>8}  {:>10}  {:>8}",
        "beta", "k (J_k)", "ARI", "k (last)", "ARI"
    );
    for beta in [0.01, 0.05, 0.1, 0.2, 0.3, 0.5] {
        let with = ksplits_run(&ds.data, &KSplitsConfig::with_beta(beta))?;
        let without = ksplits_run(
            &ds.data,
            &KSplitsConfig {
                use_jk_selection: false,
                ..KSplitsConfig::with_beta(beta)
            },
        )?;
        println!(
            "{beta:>6}  {:>10}  {:>8.4}  {:>10}  {:>8.4}",
            with.final_k,
            adjusted_rand_index(truth, &with.labels)?,
            without.final_k,
            adjusted_rand_index(truth, &without.labels)?
        );
    }
    Ok(())
}
