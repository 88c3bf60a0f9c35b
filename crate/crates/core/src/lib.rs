//! Deterministic k-splits clustering.
//!
//! k-splits finds the number of clusters on its own: it starts from one
//! cluster and repeatedly cuts the cluster with the highest split priority
//! along its dominant variance axis, stopping when newly created centroids
//! come too close relative to the first split. The discovered centroids can
//! then seed an ordinary k-means run ("fine-tuning").
//!
//! ```
//! use ksplits::{data, splits};
//!
//! let spec = data::SyntheticSpec::even(400, vec![vec![0.0, 0.0], vec![40.0, 0.0]], 1.0, 7);
//! let ds = data::generate_mixture(&spec).unwrap();
//! let result = splits::ksplits_run(&ds.data, &splits::KSplitsConfig::default()).unwrap();
//! assert_eq!(result.final_k, 2);
//! ```

pub mod cli;
pub mod data;
pub mod error;
pub mod kmeans;
pub mod metrics;
pub mod numerics;
pub mod rng;
pub mod splits;
pub mod suites;

pub use error::{Error, Result};
pub use kmeans::{assign_labels, kmeans_run, KMeansConfig, KMeansInit, KMeansResult};
pub use metrics::{adjusted_rand_index, sse};
pub use numerics::{Matrix, PcaProjection};
pub use splits::{ksplits_run, ClusteringResult, KSplitsConfig, Termination};
