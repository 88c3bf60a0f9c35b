//! Dataset text I/O, label files, synthetic Gaussian mixtures and result
//! documents.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::rng::SeededRng;
use crate::splits::{ClusteringResult, KSplitsConfig, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Whitespace,
    Csv,
}

impl MatrixFormat {
    /// CSV if the first non-blank line contains a comma.
    pub fn detect(text: &str) -> Self {
        match text.lines().find(|l| !l.trim().is_empty()) {
            Some(line) if line.contains(',') => MatrixFormat::Csv,
            _ => MatrixFormat::Whitespace,
        }
    }
}

/// Parses one point per line. Blank lines are skipped.
pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<Matrix> {
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = match format {
            MatrixFormat::Whitespace => line.split_whitespace().collect(),
            MatrixFormat::Csv => line.split(',').map(str::trim).collect(),
        };
        for (col, token) in tokens.iter().enumerate() {
            let v: f64 = token.parse().map_err(|_| Error::Parse {
                line: line_no + 1,
                column: col + 1,
                message: format!("not a number: {token:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no + 1,
                    column: col + 1,
                    message: format!("non-finite value {token:?}"),
                });
            }
            values.push(v);
        }
        match cols {
            None => cols = Some(tokens.len()),
            Some(c) if c != tokens.len() => {
                return Err(Error::Parse {
                    line: line_no + 1,
                    column: tokens.len().min(c) + 1,
                    message: format!("expected {c} values, found {}", tokens.len()),
                })
            }
            Some(_) => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or(Error::EmptyData)?;
    Matrix::new(rows, cols, values)
}

pub fn load_matrix(path: impl AsRef<Path>, format: MatrixFormat) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text, format)
}

/// Loads a matrix, choosing CSV or whitespace from the first line.
pub fn load_matrix_auto(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text, MatrixFormat::detect(&text))
}

/// Whitespace-separated, 17 significant digits per value.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for row in m.iter_rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn save_matrix(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_matrix(m)).map_err(|e| Error::io(path, e))
}

/// Parses one integer label per line and shifts them so the smallest is 0.
///
/// Leading lines that are not integers are treated as a header if a line of
/// dashes ends them (the layout of partition files in the common clustering
/// benchmark collections).
pub fn parse_labels(text: &str) -> Result<Vec<usize>> {
    let lines: Vec<&str> = text.lines().collect();
    let body_start = lines
        .iter()
        .position(|l| {
            let t = l.trim();
            t.len() >= 3 && t.chars().all(|c| c == '-')
        })
        .map_or(0, |i| i + 1);

    let mut raw = Vec::new();
    for (offset, line) in lines[body_start..].iter().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: i64 = t.parse().map_err(|_| Error::Parse {
            line: body_start + offset + 1,
            column: 1,
            message: format!("not an integer label: {t:?}"),
        })?;
        raw.push(v);
    }
    let min = *raw.iter().min().ok_or(Error::EmptyData)?;
    Ok(raw.into_iter().map(|v| (v - min) as usize).collect())
}

pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text)
}

pub fn format_labels(labels: &[usize]) -> String {
    let mut out = String::with_capacity(labels.len() * 3);
    for l in labels {
        out.push_str(&l.to_string());
        out.push('\n');
    }
    out
}

pub fn save_labels(path: impl AsRef<Path>, labels: &[usize]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_labels(labels)).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Spread {
    Isotropic(f64),
    PerAxis(Vec<f64>),
}

impl Spread {
    fn std_at(&self, axis: usize) -> f64 {
        match self {
            Spread::Isotropic(s) => *s,
            Spread::PerAxis(s) => s[axis],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSpec {
    pub count: usize,
    pub mean: Vec<f64>,
    pub std: Spread,
}

/// A mixture of axis-aligned Gaussians.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_points: usize,
    pub dim: usize,
    pub clusters: Vec<ComponentSpec>,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Isotropic clusters of equal std around the given means; `n_points` is
    /// divided as evenly as possible, earlier clusters taking the remainder.
    pub fn even(n_points: usize, means: Vec<Vec<f64>>, std: f64, seed: u64) -> Self {
        let c = means.len().max(1);
        let dim = means.first().map_or(0, Vec::len);
        let clusters = means
            .into_iter()
            .enumerate()
            .map(|(i, mean)| ComponentSpec {
                count: n_points / c + usize::from(i < n_points % c),
                mean,
                std: Spread::Isotropic(std),
            })
            .collect();
        Self {
            n_points,
            dim,
            clusters,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.clusters.is_empty() {
            return bad("mixture needs at least one cluster".into());
        }
        if self.dim == 0 {
            return bad("dimension must be positive".into());
        }
        let total: usize = self.clusters.iter().map(|c| c.count).sum();
        if total != self.n_points {
            return bad(format!(
                "cluster counts sum to {total}, expected {}",
                self.n_points
            ));
        }
        for (i, c) in self.clusters.iter().enumerate() {
            if c.mean.len() != self.dim {
                return bad(format!("cluster {i}: mean has length {}", c.mean.len()));
            }
            let ok = match &c.std {
                Spread::Isotropic(s) => *s > 0.0 && s.is_finite(),
                Spread::PerAxis(s) => {
                    s.len() == self.dim && s.iter().all(|v| *v > 0.0 && v.is_finite())
                }
            };
            if !ok {
                return bad(format!("cluster {i}: standard deviation must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub name: String,
    pub data: Matrix,
    pub truth: Option<Vec<usize>>,
}

impl LabeledDataset {
    pub fn clusters(&self) -> Option<usize> {
        self.truth
            .as_ref()
            .map(|t| t.iter().max().map_or(0, |m| m + 1))
    }
}

/// Samples the mixture cluster by cluster, rows in cluster order.
pub fn generate_mixture(spec: &SyntheticSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let mut rng = SeededRng::new(spec.seed);
    let mut values = Vec::with_capacity(spec.n_points * spec.dim);
    let mut truth = Vec::with_capacity(spec.n_points);
    for (label, c) in spec.clusters.iter().enumerate() {
        for _ in 0..c.count {
            for (axis, mu) in c.mean.iter().enumerate() {
                values.push(rng.normal(*mu, c.std.std_at(axis)));
            }
            truth.push(label);
        }
    }
    Ok(LabeledDataset {
        name: format!(
            "mixture-{}x{}-c{}",
            spec.n_points,
            spec.dim,
            spec.clusters.len()
        ),
        data: Matrix::new(spec.n_points, spec.dim, values)?,
        truth: Some(truth),
    })
}

/// `count` cluster means on a regular lattice filling `[0, extent]^dim`.
///
/// The lattice uses the smallest per-axis resolution `s` with
/// `s^dim >= count`, and takes the first `count` nodes in row-major order.
pub fn grid_means(count: usize, dim: usize, extent: f64) -> Vec<Vec<f64>> {
    let mut side = 1usize;
    while side.checked_pow(dim as u32).is_some_and(|v| v < count) {
        side += 1;
    }
    let step = if side > 1 {
        extent / (side - 1) as f64
    } else {
        0.0
    };
    (0..count)
        .map(|mut idx| {
            let mut p = vec![0.0; dim];
            for x in p.iter_mut().rev() {
                *x = (idx % side) as f64 * step;
                idx /= side;
            }
            p
        })
        .collect()
}

/// `count` means drawn uniformly from `[0, extent]^dim`, rejecting draws
/// closer than `min_separation` to an accepted mean. After 1000 consecutive
/// rejections the separation requirement is dropped for that mean.
pub fn random_means(
    count: usize,
    dim: usize,
    extent: f64,
    min_separation: f64,
    rng: &mut SeededRng,
) -> Vec<Vec<f64>> {
    let mut means: Vec<Vec<f64>> = Vec::with_capacity(count);
    while means.len() < count {
        let mut attempts = 0;
        let candidate = loop {
            let p: Vec<f64> = (0..dim).map(|_| rng.uniform_range(0.0, extent)).collect();
            attempts += 1;
            let clear = means.iter().all(|m| {
                crate::numerics::squared_euclidean(m, &p) >= min_separation * min_separation
            });
            if clear || attempts >= 1000 {
                break p;
            }
        };
        means.push(candidate);
    }
    means
}

/// On-disk form of a [`ClusteringResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub final_k: usize,
    pub centroids: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub trace: Vec<TraceEntry>,
    pub selected_iteration: usize,
    pub d_base: f64,
    pub fine_tuned: bool,
    pub termination: Termination,
    /// Absent when timing was not recorded.
    pub wall_time: Option<f64>,
    pub config: KSplitsConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub k: usize,
    pub j_k: Option<f64>,
    pub d: Option<f64>,
    pub ratio: Option<f64>,
}

impl ResultDocument {
    pub fn from_result(result: &ClusteringResult, include_time: bool) -> Self {
        Self {
            final_k: result.final_k,
            centroids: result.centroids.clone(),
            labels: result.labels.clone(),
            trace: result
                .trace
                .iter()
                .map(|s| TraceEntry {
                    k: s.k,
                    j_k: s.j_k,
                    d: s.min_pair_distance,
                    ratio: s.ratio,
                })
                .collect(),
            selected_iteration: result.selected_iteration,
            d_base: result.d_base,
            fine_tuned: result.fine_tuned,
            termination: result.termination,
            wall_time: include_time.then_some(result.wall_time),
            config: result.config,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes the result document as JSON, timing included.
pub fn save_result(result: &ClusteringResult, path: impl AsRef<Path>) -> Result<()> {
    save_document(&ResultDocument::from_result(result, true), path)
}

pub fn save_document(doc: &ResultDocument, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, doc.to_json()?).map_err(|e| Error::io(path, e))
}

pub fn load_result(path: impl AsRef<Path>) -> Result<ResultDocument> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
