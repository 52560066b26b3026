//! K-nearest-neighbour similarity graph and its Laplacian.

use crate::data::Matrix;
use crate::error::{Error, Result};

/// Gaussian-weighted KNN graph over the rows of a feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    /// Symmetric weights, zero diagonal, nonzero only between connected pairs.
    pub similarity: Matrix,
    /// Degree matrix minus similarity.
    pub laplacian: Matrix,
    pub k: usize,
    pub bandwidth: f64,
}

fn squared_distances(features: &Matrix) -> Matrix {
    let n = features.nrows();
    let mut dist = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d2: f64 = features
                .row(i)
                .iter()
                .zip(features.row(j).iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            dist[(i, j)] = d2;
            dist[(j, i)] = d2;
        }
    }
    dist
}

/// The `k` nearest other rows of each row. Ties go to the smaller index.
pub fn knn_lists(features: &Matrix, k: usize) -> Vec<Vec<usize>> {
    let dist = squared_distances(features);
    let n = features.nrows();
    (0..n)
        .map(|i| {
            let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| dist[(i, a)].total_cmp(&dist[(i, b)]).then(a.cmp(&b)));
            others.truncate(k);
            others
        })
        .collect()
}

/// Connects `i` and `j` when either is among the other's `k` nearest
/// neighbours and weights the edge by `exp(-|x_i - x_j|^2 / (2 bandwidth^2))`.
pub fn build_graph(features: &Matrix, k: usize, bandwidth: f64) -> Result<SimilarityGraph> {
    let n = features.nrows();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "a similarity graph needs at least 2 samples, got {n}"
        )));
    }
    if k < 1 || k > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "neighbour count {k} outside [1, {}]",
            n - 1
        )));
    }
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }

    let dist = squared_distances(features);
    let mut connected = vec![false; n * n];
    for (i, neighbours) in knn_lists(features, k).into_iter().enumerate() {
        for j in neighbours {
            connected[i * n + j] = true;
            connected[j * n + i] = true;
        }
    }

    let two_s2 = 2.0 * bandwidth * bandwidth;
    let mut similarity = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if connected[i * n + j] {
                let w = (-dist[(i, j)] / two_s2).exp();
                similarity[(i, j)] = w;
                similarity[(j, i)] = w;
            }
        }
    }

    let mut laplacian = -similarity.clone();
    for i in 0..n {
        laplacian[(i, i)] = similarity.row(i).sum();
    }

    Ok(SimilarityGraph {
        similarity,
        laplacian,
        k,
        bandwidth,
    })
}

impl SimilarityGraph {
    pub fn n(&self) -> usize {
        self.similarity.nrows()
    }

    /// Largest Laplacian eigenvalue by power iteration (Rayleigh quotient of the final iterate).
    pub fn largest_eigenvalue(&self, iterations: usize) -> f64 {
        let n = self.n();
        // Deterministic start with a component off the constant null vector.
        let mut v = nalgebra::DVector::from_fn(n, |i, _| ((i + 1) as f64).sin());
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v /= norm;
        for _ in 0..iterations {
            let w = &self.laplacian * &v;
            let wn = w.norm();
            if wn == 0.0 {
                return 0.0;
            }
            v = w / wn;
        }
        v.dot(&(&self.laplacian * &v))
    }
}

/// Graph smoothness `tr(DᵀGD)`.
///
/// The weighted pairwise sum `Σ_ij A_ij |d_i - d_j|²` over ordered pairs is
/// twice this value; see [`pairwise_energy`].
pub fn smoothness_energy(graph: &SimilarityGraph, d: &Matrix) -> Result<f64> {
    if d.nrows() != graph.n() {
        return Err(Error::Dimension(format!(
            "distribution matrix has {} rows, graph has {} nodes",
            d.nrows(),
            graph.n()
        )));
    }
    let gd = &graph.laplacian * d;
    Ok(d.component_mul(&gd).sum())
}

/// `Σ_ij A_ij |d_i - d_j|²` summed over all ordered pairs.
pub fn pairwise_energy(graph: &SimilarityGraph, d: &Matrix) -> Result<f64> {
    if d.nrows() != graph.n() {
        return Err(Error::Dimension(format!(
            "distribution matrix has {} rows, graph has {} nodes",
            d.nrows(),
            graph.n()
        )));
    }
    let n = graph.n();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = graph.similarity[(i, j)];
            if a != 0.0 {
                total += a * (d.row(i) - d.row(j)).norm_squared();
            }
        }
    }
    Ok(total)
}
