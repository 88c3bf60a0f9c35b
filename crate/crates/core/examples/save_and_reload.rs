//! Persist a clustering result as JSON plus a labels file and load it back.

use ksplits::data::{load_labels, load_result, save_labels, save_result};
use ksplits::suites::g2;
use ksplits::{ksplits_run, KSplitsConfig};

fn main() -> ksplits::Result<()> {
    let ds = g2(8, 10.0, 3)?;
    let result = ksplits_run(&ds.data, &KSplitsConfig::default())?;

    let dir = std::env::temp_dir();
    let doc_path = dir.join("ksplits-example-result.json");
    let labels_path = dir.join("ksplits-example-result.labels");
    save_result(&result, &doc_path)?;
    save_labels(&labels_path, &result.labels)?;

    let doc = load_result(&doc_path)?;
    let labels = load_labels(&labels_path)?;
    println!("saved to {}", doc_path.display());
    println!(
        "final_k = {}, trace entries = {}, selected = {}, termination = {:?}",
        doc.final_k,
        doc.trace.len(),
        doc.selected_iteration,
        doc.termination
    );
    println!(
        "config: beta = {}, fine_tune = {}",
        doc.config.beta, doc.config.fine_tune
    );
    assert_eq!(doc.labels, result.labels);
    assert_eq!(labels, result.labels);
    println!("labels round-trip intact ({} points)", labels.len());
    Ok(())
}
