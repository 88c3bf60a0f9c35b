//! Desk-scale benchmark datasets and the runners behind `ksplits bench`.
//!
//! The generated analogues mimic the structure of the classic synthetic
//! clustering benchmarks (A, S, Dim, G2, Unbalance) at the same N, C and
//! dimension. The original files can be used instead via
//! [`load_original`].

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::data::{
    generate_mixture, grid_means, load_labels, load_matrix_auto, random_means, ComponentSpec,
    LabeledDataset, Spread, SyntheticSpec,
};
use crate::error::{Error, Result};
use crate::kmeans::{kmeans_run, KMeansConfig, KMeansResult};
use crate::metrics::adjusted_rand_index;
use crate::rng::SeededRng;
use crate::splits::{ksplits_run, KSplitsConfig};

/// β presets: sparse, medium-density and very dense data.
pub const BETA_SPARSE: f64 = 0.01;
pub const BETA_MEDIUM: f64 = 0.1;
pub const BETA_DENSE: f64 = 0.95;

fn named(mut ds: LabeledDataset, name: impl Into<String>) -> LabeledDataset {
    ds.name = name.into();
    ds
}

/// Two Gaussians centred at 500 and 600 on every axis, 1024 points each.
pub fn g2(dim: usize, std: f64, seed: u64) -> Result<LabeledDataset> {
    let spec = SyntheticSpec::even(2048, vec![vec![500.0; dim], vec![600.0; dim]], std, seed);
    Ok(named(generate_mixture(&spec)?, format!("g2-{dim}-{std}")))
}

/// 15 isotropic 2-D clusters, 5000 points, moderate overlap.
pub fn s1(seed: u64) -> Result<LabeledDataset> {
    let mut rng = SeededRng::new(seed ^ 0x5151);
    let means = random_means(15, 2, 100.0, 16.0, &mut rng);
    let spec = SyntheticSpec::even(5000, means, 2.6, seed);
    Ok(named(generate_mixture(&spec)?, "s1"))
}

/// 20 isotropic 2-D clusters of 150 points.
pub fn a1(seed: u64) -> Result<LabeledDataset> {
    let mut rng = SeededRng::new(seed ^ 0xa1a1);
    let means = random_means(20, 2, 100.0, 13.0, &mut rng);
    let spec = SyntheticSpec::even(3000, means, 2.2, seed);
    Ok(named(generate_mixture(&spec)?, "a1"))
}

/// 16 well-separated clusters in 32 dimensions, 64 points each.
pub fn dim32(seed: u64) -> Result<LabeledDataset> {
    let mut rng = SeededRng::new(seed ^ 0xd132);
    let means = random_means(16, 32, 100.0, 60.0, &mut rng);
    let spec = SyntheticSpec::even(1024, means, 0.5, seed);
    Ok(named(generate_mixture(&spec)?, "dim32"))
}

/// Three dense clusters of 2000 points next to five sparse clusters of 100.
pub fn unbalance(seed: u64) -> Result<LabeledDataset> {
    let dense = [[0.0, 0.0], [40.0, 0.0], [20.0, 35.0]];
    let sparse = [
        [900.0, -80.0],
        [900.0, 80.0],
        [1000.0, -120.0],
        [1000.0, 0.0],
        [1000.0, 120.0],
    ];
    let mut clusters = Vec::new();
    for m in dense {
        clusters.push(ComponentSpec {
            count: 2000,
            mean: m.to_vec(),
            std: Spread::Isotropic(2.0),
        });
    }
    for m in sparse {
        clusters.push(ComponentSpec {
            count: 100,
            mean: m.to_vec(),
            std: Spread::Isotropic(8.0),
        });
    }
    let spec = SyntheticSpec {
        n_points: 6500,
        dim: 2,
        clusters,
        seed,
    };
    Ok(named(generate_mixture(&spec)?, "unbalance"))
}

/// Equal-size isotropic clusters with means drawn uniformly from a box that
/// grows with the cluster count, at least eight standard deviations apart.
pub fn random_mixture(
    n: usize,
    clusters: usize,
    dim: usize,
    std: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    let mut rng = SeededRng::new(seed ^ 0x5eed);
    let extent = 20.0 * std * (clusters as f64).powf(1.0 / dim.min(3) as f64).max(2.0);
    let means = random_means(clusters, dim, extent, 8.0 * std, &mut rng);
    let spec = SyntheticSpec::even(n, means, std, seed);
    generate_mixture(&spec)
}

/// Side of the box the sweep means are drawn from.
pub const SWEEP_EXTENT: f64 = 40.0;

/// β for the sweep-n and sweep-dim suites.
pub const SWEEP_BETA: f64 = 0.1;

/// Dataset used by the parameter sweeps: unit-std clusters with means drawn
/// from a fixed box, at least eight units apart.
pub fn sweep_mixture(n: usize, clusters: usize, dim: usize, seed: u64) -> Result<LabeledDataset> {
    let mut rng = SeededRng::new(seed ^ 0x5eed);
    let means = random_means(clusters, dim, SWEEP_EXTENT, 8.0, &mut rng);
    let spec = SyntheticSpec::even(n, means, 1.0, seed);
    Ok(named(
        generate_mixture(&spec)?,
        format!("sweep-n{n}-c{clusters}-d{dim}"),
    ))
}

/// Means on a lattice; used by `generate --arrangement grid`.
pub fn grid_mixture(
    n: usize,
    clusters: usize,
    dim: usize,
    std: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    let extent = 10.0 * std * ((clusters as f64).powf(1.0 / dim as f64).ceil() - 1.0).max(1.0);
    let spec = SyntheticSpec::even(n, grid_means(clusters, dim, extent), std, seed);
    generate_mixture(&spec)
}

/// Benchmark entry: a dataset with the β class it is run under.
#[derive(Debug, Clone)]
pub struct BenchCase {
    pub dataset: LabeledDataset,
    pub beta: f64,
    /// `"generated"` or `"original"`.
    pub source: &'static str,
}

pub fn table1_desk(seed: u64) -> Result<Vec<BenchCase>> {
    let generated = |dataset, beta| BenchCase {
        dataset,
        beta,
        source: "generated",
    };
    Ok(vec![
        generated(a1(seed)?, BETA_MEDIUM),
        generated(s1(seed)?, BETA_MEDIUM),
        generated(dim32(seed)?, BETA_SPARSE),
        generated(g2(2, 10.0, seed)?, BETA_MEDIUM),
        generated(g2(128, 10.0, seed)?, BETA_MEDIUM),
        generated(unbalance(seed)?, BETA_SPARSE),
    ])
}

/// Original benchmark files looked up in `dir`, with their β class.
pub const ORIGINAL_FILES: &[(&str, f64)] = &[
    ("a1", BETA_MEDIUM),
    ("s1", BETA_MEDIUM),
    ("dim032", BETA_SPARSE),
    ("unbalance", BETA_SPARSE),
];

/// Loads `<dir>/<stem>.txt` and, when present, ground truth from
/// `<stem>-gt.pa`, `<stem>.labels` or `<stem>-labels.txt`.
pub fn load_original(dir: &Path, stem: &str) -> Result<Option<LabeledDataset>> {
    let data_path = dir.join(format!("{stem}.txt"));
    if !data_path.exists() {
        return Ok(None);
    }
    let data = load_matrix_auto(&data_path)?;
    let truth = [
        format!("{stem}-gt.pa"),
        format!("{stem}.labels"),
        format!("{stem}-labels.txt"),
    ]
    .iter()
    .map(|f| dir.join(f))
    .find(|p| p.exists())
    .map(load_labels)
    .transpose()?;
    if let Some(t) = &truth {
        if t.len() != data.rows() {
            return Err(Error::LengthMismatch {
                left: data.rows(),
                right: t.len(),
            });
        }
    }
    Ok(Some(LabeledDataset {
        name: stem.to_string(),
        data,
        truth,
    }))
}

pub fn originals(dir: &Path) -> Result<Vec<BenchCase>> {
    let mut cases = Vec::new();
    for &(stem, beta) in ORIGINAL_FILES {
        if let Some(dataset) = load_original(dir, stem)? {
            cases.push(BenchCase {
                dataset,
                beta,
                source: "original",
            });
        }
    }
    Ok(cases)
}

/// One CSV row of benchmark output. Field names are the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub dataset: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "C")]
    pub c: usize,
    pub dim: usize,
    pub algorithm: String,
    pub detected_k: usize,
    pub ari: f64,
    pub time_s: f64,
}

/// Best of `repeats` random-init k-means runs by SSE; seeds are
/// `seed..seed + repeats`. Returns the kept run, its seed and the total time.
pub fn kmeans_best_of(
    data: &crate::numerics::Matrix,
    k: usize,
    repeats: usize,
    seed: u64,
) -> Result<(KMeansResult, u64, f64)> {
    if repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be positive".into()));
    }
    let start = Instant::now();
    let mut best: Option<(KMeansResult, u64)> = None;
    for r in 0..repeats as u64 {
        let s = seed.wrapping_add(r);
        let run = kmeans_run(data, &KMeansConfig::random(k, s))?;
        if best.as_ref().is_none_or(|(b, _)| run.sse < b.sse) {
            best = Some((run, s));
        }
    }
    let (run, s) = best.expect("repeats > 0");
    Ok((run, s, start.elapsed().as_secs_f64()))
}

/// Runs raw k-splits, fine-tuned k-splits and 10R k-means on one case.
pub fn bench_case(case: &BenchCase, seed: u64) -> Result<Vec<BenchRow>> {
    let ds = &case.dataset;
    let truth = ds.truth.as_deref();
    let c = ds.clusters().unwrap_or(0);
    let ari = |labels: &[usize]| -> Result<f64> {
        truth.map_or(Ok(f64::NAN), |t| adjusted_rand_index(t, labels))
    };
    let name = if case.source == "original" {
        format!("{}-original", ds.name)
    } else {
        ds.name.clone()
    };
    let row = |algorithm: &str, k, ari, time_s| BenchRow {
        dataset: name.clone(),
        n: ds.data.rows(),
        c,
        dim: ds.data.cols(),
        algorithm: algorithm.to_string(),
        detected_k: k,
        ari,
        time_s,
    };

    let raw_cfg = KSplitsConfig {
        fine_tune: false,
        ..KSplitsConfig::with_beta(case.beta)
    };
    let raw = ksplits_run(&ds.data, &raw_cfg)?;
    let tuned = ksplits_run(&ds.data, &KSplitsConfig::with_beta(case.beta))?;
    let mut rows = vec![
        row("k-splits", raw.final_k, ari(&raw.labels)?, raw.wall_time),
        row(
            "k-splits-ft",
            tuned.final_k,
            ari(&tuned.labels)?,
            tuned.wall_time,
        ),
    ];
    if c > 0 {
        let (best, _, time) = kmeans_best_of(&ds.data, c, 10, seed)?;
        rows.push(row("kmeans-10R", c, ari(&best.labels)?, time));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Table1Desk,
    SweepN,
    SweepC,
    SweepDim,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "table1-desk" => Ok(Suite::Table1Desk),
            "sweep-n" => Ok(Suite::SweepN),
            "sweep-c" => Ok(Suite::SweepC),
            "sweep-dim" => Ok(Suite::SweepDim),
            other => Err(format!(
                "unknown suite {other:?} (expected table1-desk, sweep-n, sweep-c or sweep-dim)"
            )),
        }
    }
}

pub const SWEEP_N: &[usize] = &[500, 1000, 2000, 5000, 10_000, 20_000, 30_000];
pub const SWEEP_C: &[usize] = &[2, 5, 8, 10, 15, 20, 25, 30, 40, 50];
pub const SWEEP_DIM: &[usize] = &[2, 3, 5, 10, 20, 50, 100];

/// β as a function of the expected cluster count for the sweep-c suite.
pub fn scheduled_beta(clusters: usize) -> f64 {
    0.1 + 0.1 / clusters.max(1) as f64
}

/// Sweep datasets and the β used for each.
pub fn sweep_cases(suite: Suite, seed: u64) -> Result<Vec<BenchCase>> {
    let case = |dataset, beta| BenchCase {
        dataset,
        beta,
        source: "generated",
    };
    let mut cases = Vec::new();
    match suite {
        Suite::Table1Desk => return table1_desk(seed),
        Suite::SweepN => {
            for &n in SWEEP_N {
                cases.push(case(sweep_mixture(n, 10, 10, seed)?, SWEEP_BETA));
            }
        }
        Suite::SweepC => {
            for &c in SWEEP_C {
                cases.push(case(sweep_mixture(10_000, c, 10, seed)?, scheduled_beta(c)));
            }
        }
        Suite::SweepDim => {
            for &d in SWEEP_DIM {
                cases.push(case(sweep_mixture(10_000, 10, d, seed)?, SWEEP_BETA));
            }
        }
    }
    Ok(cases)
}

pub fn run_suite(suite: Suite, seed: u64, data_dir: Option<&Path>) -> Result<Vec<BenchRow>> {
    let cases = match (suite, data_dir) {
        (Suite::Table1Desk, Some(dir)) => {
            let found = originals(dir)?;
            if found.is_empty() {
                table1_desk(seed)?
            } else {
                found
            }
        }
        _ => sweep_cases(suite, seed)?,
    };
    let mut rows = Vec::new();
    for case in &cases {
        rows.extend(bench_case(case, seed)?);
    }
    Ok(rows)
}
