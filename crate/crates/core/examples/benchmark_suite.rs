//! Run the cluster-count sweep and print detected k against the truth.

use ksplits::suites::{run_suite, Suite};

fn main() -> ksplits::Result<()> {
    let rows = run_suite(Suite::SweepC, 0, None)?;
    println!(
        "{:<24} {:>4} {:>12} {:>10} {:>8} {:>9}",
        "dataset", "C", "algorithm", "detected", "ARI", "time (s)"
    );
    for r in &rows {
        println!(
            "{:<24} {:>4} {:>12} {:>10} {:>8.4} {:>9.4}",
            r.dataset, r.c, r.algorithm, r.detected_k, r.ari, r.time_s
        );
    }
    let ks: Vec<_> = rows.iter().filter(|r| r.algorithm == "k-splits").collect();
    let hits = ks.iter().filter(|r| r.detected_k == r.c).count();
    println!("k-splits found the true C on {hits}/{} datasets", ks.len());
    Ok(())
}
