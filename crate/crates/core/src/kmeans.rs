//! Lloyd's k-means with seeded random-point or caller-supplied initialization.

use crate::error::{Error, Result};
use crate::numerics::{squared_euclidean, Matrix};
use crate::rng::SeededRng;

pub const DEFAULT_MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub enum KMeansInit {
    /// `k` distinct data points drawn with [`SeededRng::sample_indices`].
    RandomPoints {
        seed: u64,
    },
    GivenCentroids(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub init: KMeansInit,
    pub max_iterations: usize,
}

impl KMeansConfig {
    pub fn random(k: usize, seed: u64) -> Self {
        Self {
            k,
            init: KMeansInit::RandomPoints { seed },
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn from_centroids(centroids: Vec<Vec<f64>>) -> Self {
        Self {
            k: centroids.len(),
            init: KMeansInit::GivenCentroids(centroids),
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    fn validate(&self, data: &Matrix) -> Result<()> {
        if data.is_empty() {
            return Err(Error::EmptyData);
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be positive".into()));
        }
        if self.k > data.rows() {
            return Err(Error::InvalidConfig(format!(
                "k = {} exceeds the number of points ({})",
                self.k,
                data.rows()
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be positive".into(),
            ));
        }
        if let KMeansInit::GivenCentroids(c) = &self.init {
            if c.len() != self.k {
                return Err(Error::InvalidConfig(format!(
                    "{} initial centroids for k = {}",
                    c.len(),
                    self.k
                )));
            }
            if let Some(bad) = c.iter().find(|c| c.len() != data.cols()) {
                return Err(Error::DimensionMismatch {
                    expected: data.cols(),
                    actual: bad.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub centroids: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    /// Number of centroid updates performed.
    pub iterations: usize,
    pub sse: f64,
    /// SSE after every assignment step, first entry from the initial centroids.
    pub sse_history: Vec<f64>,
    pub converged: bool,
}

/// Index of the nearest centroid for every row; ties go to the lowest index.
pub fn assign_labels(data: &Matrix, centroids: &[Vec<f64>]) -> Result<Vec<usize>> {
    if centroids.is_empty() {
        return Err(Error::InvalidConfig("no centroids".into()));
    }
    if let Some(bad) = centroids.iter().find(|c| c.len() != data.cols()) {
        return Err(Error::DimensionMismatch {
            expected: data.cols(),
            actual: bad.len(),
        });
    }
    Ok(data.iter_rows().map(|p| nearest(p, centroids).0).collect())
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = squared_euclidean(point, &centroids[0]);
    for (j, c) in centroids.iter().enumerate().skip(1) {
        let d = squared_euclidean(point, c);
        if d < best_d {
            best = j;
            best_d = d;
        }
    }
    (best, best_d)
}

fn sse_of(data: &Matrix, labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
    data.iter_rows()
        .zip(labels)
        .map(|(p, &l)| squared_euclidean(p, &centroids[l]))
        .sum()
}

/// Moves points into empty clusters until every cluster has a member. Each
/// empty cluster takes the point farthest from its current centroid among
/// clusters that can spare one.
fn repair_empty(data: &Matrix, labels: &mut [usize], centroids: &[Vec<f64>], k: usize) {
    let mut counts = vec![0usize; k];
    for &l in labels.iter() {
        counts[l] += 1;
    }
    for empty in 0..k {
        if counts[empty] > 0 {
            continue;
        }
        let mut far = None;
        let mut far_d = -1.0;
        for (i, p) in data.iter_rows().enumerate() {
            let l = labels[i];
            if counts[l] < 2 {
                continue;
            }
            let d = squared_euclidean(p, &centroids[l]);
            if d > far_d {
                far_d = d;
                far = Some(i);
            }
        }
        let i = far.expect("k <= number of points leaves a donor cluster");
        counts[labels[i]] -= 1;
        labels[i] = empty;
        counts[empty] = 1;
    }
}

fn means(data: &Matrix, labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; data.cols()]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in data.iter_rows().zip(labels) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p) {
            *s += x;
        }
    }
    sums.into_iter()
        .zip(counts)
        .map(|(s, c)| s.into_iter().map(|v| v / c as f64).collect())
        .collect()
}

/// Runs Lloyd iterations until the assignment stops changing or
/// `max_iterations` updates have been made.
pub fn kmeans_run(data: &Matrix, config: &KMeansConfig) -> Result<KMeansResult> {
    config.validate(data)?;
    let k = config.k;
    let mut centroids = match &config.init {
        KMeansInit::GivenCentroids(c) => c.clone(),
        KMeansInit::RandomPoints { seed } => SeededRng::new(*seed)
            .sample_indices(data.rows(), k)
            .into_iter()
            .map(|i| data.row(i).to_vec())
            .collect(),
    };

    let mut labels = assign_labels(data, &centroids)?;
    let mut sse_history = vec![sse_of(data, &labels, &centroids)];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < config.max_iterations {
        repair_empty(data, &mut labels, &centroids, k);
        centroids = means(data, &labels, k);
        iterations += 1;
        let next = assign_labels(data, &centroids)?;
        sse_history.push(sse_of(data, &next, &centroids));
        if next == labels {
            converged = true;
            break;
        }
        labels = next;
    }

    if !converged {
        repair_empty(data, &mut labels, &centroids, k);
        centroids = means(data, &labels, k);
    }
    let sse = sse_of(data, &labels, &centroids);
    Ok(KMeansResult {
        centroids,
        labels,
        iterations,
        sse,
        sse_history,
        converged,
    })
}
