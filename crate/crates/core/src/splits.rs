//! Divisive k-splits clustering.
//!
//! Starting from one cluster (or a seeded k-means partition), each iteration
//! scores every cluster, picks the one with the highest split priority, cuts
//! it with the hyperplane through its centroid perpendicular to its dominant
//! covariance axis, and refines the two halves with 2-means. The first split
//! fixes the reference distance `d_base`. Every later split is kept only
//! while the smallest centroid gap `d` stays above `beta * d_base`; the split
//! that crosses the threshold is discarded and the run ends.
//!
//! Scores per cluster `C` with `Q_C` members, top covariance eigenvalue
//! `λ1`, `Q` points overall and `k` clusters:
//!
//! * density `J^C = Q_C / λ1`, and `J_k` is their mean over the clusters;
//! * split priority `I^C = tanh(Q_C / thr) · λ1` with `thr = Q / k`. The
//!   `tanh` saturates so large, tight clusters do not monopolise splitting.
//!
//! Optionally the iteration with the largest `J_k` is reported instead of
//! the last one, and the reported centroids can seed a final full k-means.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kmeans::{kmeans_run, KMeansConfig, KMeansResult};
use crate::numerics::{centroid_of, covariance_of, dominant_eigenpair, dot, euclidean, Matrix};

/// Spectral summary of a cluster, computed once when the cluster is formed.
#[derive(Debug, Clone, PartialEq)]
pub struct Spread {
    pub lambda1: f64,
    pub axis: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitScores {
    pub lambda1: f64,
    /// `Q_C / λ1`; `None` when `λ1 = 0`.
    pub j_score: Option<f64>,
    pub i_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterView {
    pub members: Vec<usize>,
    pub centroid: Vec<f64>,
    pub spread: Option<Spread>,
    pub scores: Option<SplitScores>,
    pub splittable: bool,
}

impl ClusterView {
    pub fn new(data: &Matrix, members: Vec<usize>) -> Result<Self> {
        let centroid = centroid_of(data, &members)?;
        Ok(Self::with_centroid(members, centroid))
    }

    fn with_centroid(members: Vec<usize>, centroid: Vec<f64>) -> Self {
        Self {
            members,
            centroid,
            spread: None,
            scores: None,
            splittable: true,
        }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Computes and caches the dominant covariance eigenpair.
    pub fn analyze(&mut self, data: &Matrix) -> Result<&Spread> {
        if self.spread.is_none() {
            let cov = covariance_of(data, &self.members, &self.centroid)?;
            let pair = dominant_eigenpair(&cov)?;
            self.spread = Some(Spread {
                lambda1: pair.value,
                axis: pair.vector,
            });
        }
        Ok(self.spread.as_ref().expect("just set"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSplitsConfig {
    /// Stop threshold on `d / d_base`, strictly inside (0, 1). Dense data
    /// usually wants a larger value, sparse data a smaller one.
    pub beta: f64,
    pub initial_k: usize,
    /// Report the iteration with the largest `J_k` rather than the last one.
    /// Not advisable for heavily overlapping or very dense data.
    pub use_jk_selection: bool,
    pub fine_tune: bool,
    /// Upper bound on the number of clusters; `None` means `max(2, N / 2)`.
    pub max_clusters: Option<usize>,
    /// Seed for the initial k-means when `initial_k > 1`.
    pub seed: u64,
}

impl Default for KSplitsConfig {
    fn default() -> Self {
        Self {
            beta: 0.1,
            initial_k: 1,
            use_jk_selection: true,
            fine_tune: true,
            max_clusters: None,
            seed: 0,
        }
    }
}

impl KSplitsConfig {
    pub fn with_beta(beta: f64) -> Self {
        Self {
            beta,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "beta = {} must lie in the open interval (0, 1)",
                self.beta
            )));
        }
        if self.initial_k == 0 {
            return Err(Error::InvalidConfig("initial_k must be positive".into()));
        }
        if self.max_clusters == Some(0) {
            return Err(Error::InvalidConfig("max_clusters must be positive".into()));
        }
        Ok(())
    }
}

/// State of the clustering at the start of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationSnapshot {
    pub k: usize,
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Mean `J^C` over clusters with non-zero spread.
    pub j_k: Option<f64>,
    /// Cluster chosen for splitting in this iteration.
    pub split_cluster: Option<usize>,
    /// Smallest centroid gap after this iteration's split; absent for the
    /// split that fixes `d_base`.
    pub min_pair_distance: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// `d / d_base <= beta`; the last split was discarded.
    BetaCondition,
    /// No cluster could be split further.
    Unsplittable,
    MaxClusters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub final_k: usize,
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub trace: Vec<IterationSnapshot>,
    pub selected_iteration: usize,
    pub d_base: f64,
    pub fine_tuned: bool,
    pub termination: Termination,
    pub config: KSplitsConfig,
    /// Seconds spent in [`ksplits_run`], fine-tuning included.
    pub wall_time: f64,
}

impl ClusteringResult {
    /// Labels of the selected iteration before fine-tuning.
    pub fn raw_labels(&self) -> &[usize] {
        &self.trace[self.selected_iteration].labels
    }

    pub fn raw_centroids(&self) -> &[Vec<f64>] {
        &self.trace[self.selected_iteration].centroids
    }
}

/// Splits a cluster by the sign of `(x − c)·v` along its dominant axis `v`
/// (non-negative side first), then refines both halves with 2-means over the
/// cluster's own points.
pub fn split_cluster(data: &Matrix, cluster: &ClusterView) -> Result<(ClusterView, ClusterView)> {
    if cluster.size() < 2 {
        return Err(Error::Unsplittable);
    }
    let mut cluster = cluster.clone();
    let axis = cluster.analyze(data)?.axis.clone();

    let mut centered = vec![0.0; data.cols()];
    let mut first = Vec::new();
    let mut second = Vec::new();
    for &i in &cluster.members {
        for ((c, x), m) in centered.iter_mut().zip(data.row(i)).zip(&cluster.centroid) {
            *c = x - m;
        }
        if dot(&centered, &axis) >= 0.0 {
            first.push(i);
        } else {
            second.push(i);
        }
    }
    if first.is_empty() || second.is_empty() {
        return Err(Error::Unsplittable);
    }

    let seeds = vec![centroid_of(data, &first)?, centroid_of(data, &second)?];
    let local = data.select_rows(&cluster.members);
    let refined = kmeans_run(&local, &KMeansConfig::from_centroids(seeds))?;

    let mut halves = [Vec::new(), Vec::new()];
    for (&i, &l) in cluster.members.iter().zip(&refined.labels) {
        halves[l].push(i);
    }
    let [a, b] = halves;
    let [ca, cb]: [Vec<f64>; 2] = refined.centroids.try_into().expect("k = 2");
    Ok((
        ClusterView::with_centroid(a, ca),
        ClusterView::with_centroid(b, cb),
    ))
}

/// Fills in `J^C` and `I^C` for the current iteration and updates the
/// splittable flag.
pub fn score_cluster(
    data: &Matrix,
    cluster: &mut ClusterView,
    total_points: usize,
    current_k: usize,
) -> Result<()> {
    let size = cluster.size();
    if size < 2 {
        cluster.scores = Some(SplitScores {
            lambda1: 0.0,
            j_score: None,
            i_score: 0.0,
        });
        cluster.splittable = false;
        return Ok(());
    }
    let lambda1 = cluster.analyze(data)?.lambda1;
    let thr = total_points as f64 / current_k as f64;
    let i_score = (size as f64 / thr).tanh() * lambda1;
    let j_score = (lambda1 > 0.0).then(|| size as f64 / lambda1);
    if lambda1 <= 0.0 {
        cluster.splittable = false;
    }
    cluster.scores = Some(SplitScores {
        lambda1,
        j_score,
        i_score,
    });
    Ok(())
}

/// Index of the splittable cluster with the highest `I^C`, lowest index on
/// ties. `None` when nothing can be split.
pub fn pick_worst(clusters: &[ClusterView]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in clusters.iter().enumerate() {
        if !c.splittable {
            continue;
        }
        let score = c.scores.as_ref().map_or(0.0, |s| s.i_score);
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((i, score));
        }
    }
    best.map(|(i, _)| i)
}

/// Smallest Euclidean distance over all unordered centroid pairs.
pub fn min_pairwise_distance(centroids: &[Vec<f64>]) -> Result<f64> {
    if centroids.len() < 2 {
        return Err(Error::InvalidConfig(
            "need at least two centroids for a pairwise distance".into(),
        ));
    }
    let mut best = f64::INFINITY;
    for i in 0..centroids.len() {
        for j in i + 1..centroids.len() {
            best = best.min(euclidean(&centroids[i], &centroids[j])?);
        }
    }
    Ok(best)
}

fn max_pairwise_distance(centroids: &[Vec<f64>]) -> Result<f64> {
    let mut best = 0.0f64;
    for i in 0..centroids.len() {
        for j in i + 1..centroids.len() {
            best = best.max(euclidean(&centroids[i], &centroids[j])?);
        }
    }
    Ok(best)
}

fn labels_of(clusters: &[ClusterView], n: usize) -> Vec<usize> {
    let mut labels = vec![0; n];
    for (c, cluster) in clusters.iter().enumerate() {
        for &i in &cluster.members {
            labels[i] = c;
        }
    }
    labels
}

fn initial_clusters(
    data: &Matrix,
    config: &KSplitsConfig,
) -> Result<(Vec<ClusterView>, Option<f64>)> {
    if config.initial_k == 1 {
        let all = (0..data.rows()).collect();
        return Ok((vec![ClusterView::new(data, all)?], None));
    }
    let km = kmeans_run(data, &KMeansConfig::random(config.initial_k, config.seed))?;
    let mut members = vec![Vec::new(); config.initial_k];
    for (i, &l) in km.labels.iter().enumerate() {
        members[l].push(i);
    }
    let d_base = max_pairwise_distance(&km.centroids)?;
    let clusters = members
        .into_iter()
        .zip(km.centroids)
        .map(|(m, c)| ClusterView::with_centroid(m, c))
        .collect();
    Ok((clusters, Some(d_base)))
}

/// Runs k-splits end to end.
pub fn ksplits_run(data: &Matrix, config: &KSplitsConfig) -> Result<ClusteringResult> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let start = Instant::now();
    let q = data.rows();
    let max_clusters = config.max_clusters.unwrap_or((q / 2).max(2));

    let (mut clusters, mut d_base) = initial_clusters(data, config)?;
    let mut trace = Vec::new();

    let termination = loop {
        let k = clusters.len();
        for c in clusters.iter_mut() {
            score_cluster(data, c, q, k)?;
        }
        let densities: Vec<f64> = clusters
            .iter()
            .filter_map(|c| c.scores.as_ref().and_then(|s| s.j_score))
            .collect();
        let j_k =
            (!densities.is_empty()).then(|| densities.iter().sum::<f64>() / densities.len() as f64);

        let mut snapshot = IterationSnapshot {
            k,
            labels: labels_of(&clusters, q),
            centroids: clusters.iter().map(|c| c.centroid.clone()).collect(),
            j_k,
            split_cluster: None,
            min_pair_distance: None,
            ratio: None,
        };

        if k >= max_clusters {
            trace.push(snapshot);
            break Termination::MaxClusters;
        }

        // Clusters whose hyperplane cut leaves a side empty are retired and
        // the next candidate is tried.
        let split = loop {
            let Some(worst) = pick_worst(&clusters) else {
                break None;
            };
            match split_cluster(data, &clusters[worst]) {
                Ok(halves) => break Some((worst, halves)),
                Err(Error::Unsplittable) => clusters[worst].splittable = false,
                Err(e) => return Err(e),
            }
        };
        let Some((worst, (first, second))) = split else {
            trace.push(snapshot);
            break Termination::Unsplittable;
        };
        snapshot.split_cluster = Some(worst);

        let mut candidate = snapshot.centroids.clone();
        candidate[worst] = first.centroid.clone();
        candidate.push(second.centroid.clone());

        match d_base {
            None => {
                d_base = Some(euclidean(&first.centroid, &second.centroid)?);
            }
            Some(base) => {
                let d = min_pairwise_distance(&candidate)?;
                let ratio = if base > 0.0 { d / base } else { 0.0 };
                snapshot.min_pair_distance = Some(d);
                snapshot.ratio = Some(ratio);
                if ratio <= config.beta {
                    trace.push(snapshot);
                    break Termination::BetaCondition;
                }
            }
        }
        trace.push(snapshot);
        clusters[worst] = first;
        clusters.push(second);
    };

    let selected_iteration = if config.use_jk_selection {
        select_by_density(&trace)
    } else {
        trace.len() - 1
    };
    let chosen = &trace[selected_iteration];
    let (labels, centroids) = if config.fine_tune {
        let tuned = fine_tune(data, &chosen.centroids)?;
        (tuned.labels, tuned.centroids)
    } else {
        (chosen.labels.clone(), chosen.centroids.clone())
    };

    Ok(ClusteringResult {
        final_k: centroids.len(),
        labels,
        centroids,
        selected_iteration,
        d_base: d_base.unwrap_or(0.0),
        fine_tuned: config.fine_tune,
        termination,
        config: *config,
        trace,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// First iteration with the largest `J_k`; the last one if no iteration has
/// a defined `J_k`.
fn select_by_density(trace: &[IterationSnapshot]) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in trace.iter().enumerate() {
        if let Some(j) = s.j_k {
            if best.is_none_or(|(_, b)| j > b) {
                best = Some((i, j));
            }
        }
    }
    best.map_or(trace.len() - 1, |(i, _)| i)
}

/// Standard k-means over all points, seeded with the given centroids.
pub fn fine_tune(data: &Matrix, centroids: &[Vec<f64>]) -> Result<KMeansResult> {
    if centroids.is_empty() {
        return Err(Error::InvalidConfig("no centroids to fine-tune".into()));
    }
    kmeans_run(data, &KMeansConfig::from_centroids(centroids.to_vec()))
}
