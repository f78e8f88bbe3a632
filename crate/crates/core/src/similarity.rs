//! Pairwise similarity over user rows or item columns, and neighborhood
//! selection.
//!
//! Real-valued similarities use only the dimensions rated by both vectors.
//! An undefined similarity (too few co-rated items, zero denominator,
//! empty union) is a distinct state, never coerced to 0.

use crate::error::{Error, Result};
use crate::exec;
use crate::ratings::{BinaryRatingMatrix, RatingMatrix};

/// Similarity measure between two profile vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Pearson,
    Cosine,
    /// Only valid for 0-1 data.
    Jaccard,
}

impl Measure {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pearson" => Ok(Measure::Pearson),
            "cosine" => Ok(Measure::Cosine),
            "jaccard" => Ok(Measure::Jaccard),
            other => Err(Error::InvalidArgument(format!(
                "unknown similarity measure `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimilarityParams {
    pub measure: Measure,
    /// Minimum number of co-rated items for a similarity to be defined.
    pub min_matching: usize,
}

impl SimilarityParams {
    pub fn new(measure: Measure) -> Self {
        SimilarityParams {
            measure,
            min_matching: 0,
        }
    }
}

/// Which profiles a similarity matrix is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Users,
    Items,
}

/// Similarity of two sparse real-valued vectors (rows or columns of the
/// same matrix), computed over co-rated dimensions only. Returns `None`
/// when undefined.
pub fn similarity(a: &[(usize, f64)], b: &[(usize, f64)], params: &SimilarityParams) -> Result<Option<f64>> {
    match params.measure {
        Measure::Jaccard => Err(Error::InvalidMeasure {
            measure: "jaccard".into(),
            kind: "real-valued".into(),
        }),
        Measure::Pearson => Ok(pearson(a, b, params.min_matching)),
        Measure::Cosine => Ok(cosine(a, b, params.min_matching)),
    }
}

/// Jaccard similarity of two item sets; `None` when the union is empty or
/// the intersection falls below `min_matching`.
pub fn jaccard(a: &[usize], b: &[usize], min_matching: usize) -> Option<f64> {
    let mut inter = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - inter;
    if union == 0 || inter < min_matching {
        return None;
    }
    Some(inter as f64 / union as f64)
}

fn co_rated(a: &[(usize, f64)], b: &[(usize, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push((a[i].1, b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn pearson(a: &[(usize, f64)], b: &[(usize, f64)], min_matching: usize) -> Option<f64> {
    let pairs = co_rated(a, b);
    let n = pairs.len();
    if n < min_matching.max(2) {
        return None;
    }
    let mean_x = pairs.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let mean_y = pairs.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (x, y) in &pairs {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    let denom = (var_x * var_y).sqrt();
    if denom == 0.0 {
        return None;
    }
    Some(cov / denom)
}

fn cosine(a: &[(usize, f64)], b: &[(usize, f64)], min_matching: usize) -> Option<f64> {
    let pairs = co_rated(a, b);
    if pairs.len() < min_matching.max(1) {
        return None;
    }
    let mut dot = 0.0;
    let mut norm_x = 0.0;
    let mut norm_y = 0.0;
    for (x, y) in &pairs {
        dot += x * y;
        norm_x += x * x;
        norm_y += y * y;
    }
    let denom = (norm_x * norm_y).sqrt();
    if denom == 0.0 {
        return None;
    }
    Some(dot / denom)
}

/// Symmetric matrix of pairwise similarities; `None` entries are undefined.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<Option<f64>>,
}

impl SimilarityMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.n + j]
    }

    /// Row of similarities for `i` (including the diagonal).
    pub fn row(&self, i: usize) -> &[Option<f64>] {
        &self.values[i * self.n..(i + 1) * self.n]
    }
}

/// All pairwise similarities between users (rows) or items (columns).
/// Rows are computed by independent workers and assembled in index order.
pub fn similarity_matrix(
    m: &RatingMatrix,
    axis: Axis,
    params: &SimilarityParams,
) -> Result<SimilarityMatrix> {
    if params.measure == Measure::Jaccard {
        return Err(Error::InvalidMeasure {
            measure: "jaccard".into(),
            kind: "real-valued".into(),
        });
    }
    let vectors: Vec<Vec<(usize, f64)>> = match axis {
        Axis::Users => (0..m.n_users()).map(|u| m.row(u).to_vec()).collect(),
        Axis::Items => m.columns(),
    };
    Ok(pairwise(&vectors, |a, b| match params.measure {
        Measure::Pearson => pearson(a, b, params.min_matching),
        Measure::Cosine => cosine(a, b, params.min_matching),
        Measure::Jaccard => unreachable!(),
    }))
}

/// All pairwise Jaccard similarities over a binary matrix.
pub fn similarity_matrix_binary(
    m: &BinaryRatingMatrix,
    axis: Axis,
    min_matching: usize,
) -> SimilarityMatrix {
    let vectors: Vec<Vec<usize>> = match axis {
        Axis::Users => (0..m.n_users()).map(|u| m.row(u).to_vec()).collect(),
        Axis::Items => m.columns(),
    };
    pairwise(&vectors, |a, b| jaccard(a, b, min_matching))
}

fn pairwise<V, F>(vectors: &[V], sim: F) -> SimilarityMatrix
where
    V: Sync,
    F: Fn(&V, &V) -> Option<f64> + Sync + Send,
{
    let n = vectors.len();
    // upper triangle (including diagonal) per row, mirrored afterwards
    let upper: Vec<Vec<Option<f64>>> =
        exec::map_indexed(n, |i| (i..n).map(|j| sim(&vectors[i], &vectors[j])).collect());
    let mut values = vec![None; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let j = i + off;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    SimilarityMatrix { n, values }
}

/// Neighborhood selection mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NeighborhoodMode {
    /// The `k` most similar, ties at the boundary broken by ascending index.
    Knn(usize),
    /// Everyone with similarity at or above the threshold.
    Threshold(f64),
}

/// Members of a neighborhood, sorted by descending similarity (ties by
/// ascending index). Undefined similarities and the target are excluded.
#[derive(Debug, Clone)]
pub struct Neighborhood {
    pub members: Vec<(usize, f64)>,
}

/// Selects the neighborhood of `target` from a similarity matrix.
pub fn select_neighborhood(
    s: &SimilarityMatrix,
    target: usize,
    mode: NeighborhoodMode,
) -> Neighborhood {
    select_from_scores(s.row(target), target, mode)
}

/// Neighborhood selection over a raw score slice; `exclude` is left out
/// (use a value `>= scores.len()` to exclude nothing).
pub fn select_from_scores(
    scores: &[Option<f64>],
    exclude: usize,
    mode: NeighborhoodMode,
) -> Neighborhood {
    let mut members: Vec<(usize, f64)> = scores
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != exclude)
        .filter_map(|(i, &s)| s.map(|v| (i, v)))
        .collect();
    if let NeighborhoodMode::Threshold(t) = mode {
        members.retain(|&(_, v)| v >= t);
    }
    members.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    if let NeighborhoodMode::Knn(k) = mode {
        members.truncate(k);
    }
    Neighborhood { members }
}
