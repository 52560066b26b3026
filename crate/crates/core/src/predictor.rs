//! Maximum-entropy (softmax-linear) label-distribution model.
//!
//! Fitted by full-batch gradient descent with Armijo backtracking on the mean
//! KL divergence from the target rows. Weights start at zero, so training is
//! deterministic.

use serde::{Deserialize, Serialize};

use crate::data::{Matrix, SUM_TOLERANCE};
use crate::error::{Error, Result};

const ARMIJO: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxEntModel {
    /// `d × m`, serialized row-major.
    #[serde(with = "row_major")]
    pub weights: Matrix,
    pub bias: Vec<f64>,
    /// `(iteration, loss)` after every accepted step; entry 0 is the initial loss.
    pub training_log: Vec<(usize, f64)>,
}

mod row_major {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::data::Matrix;

    #[derive(Serialize, Deserialize)]
    struct Dense {
        rows: usize,
        cols: usize,
        data: Vec<f64>,
    }

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        let data = m.row_iter().flat_map(|r| r.iter().copied().collect::<Vec<_>>()).collect();
        Dense { rows: m.nrows(), cols: m.ncols(), data }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        let dense = Dense::deserialize(d)?;
        if dense.data.len() != dense.rows * dense.cols {
            return Err(serde::de::Error::custom(format!(
                "{} values for a {}x{} matrix",
                dense.data.len(),
                dense.rows,
                dense.cols
            )));
        }
        Ok(Matrix::from_row_slice(dense.rows, dense.cols, &dense.data))
    }
}

/// Gradients of the mean KL loss.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

impl Gradient {
    pub fn inf_norm(&self) -> f64 {
        self.weights
            .iter()
            .chain(&self.bias)
            .fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl MaxEntModel {
    pub fn zeros(d: usize, m: usize) -> Self {
        MaxEntModel {
            weights: Matrix::zeros(d, m),
            bias: vec![0.0; m],
            training_log: Vec::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.weights.nrows()
    }

    pub fn m(&self) -> usize {
        self.weights.ncols()
    }

    fn scores(&self, features: &Matrix) -> Result<Matrix> {
        if features.ncols() != self.d() {
            return Err(Error::Dimension(format!(
                "model expects {} features, got {}",
                self.d(),
                features.ncols()
            )));
        }
        let mut s = features * &self.weights;
        for mut row in s.row_iter_mut() {
            for (v, b) in row.iter_mut().zip(&self.bias) {
                *v += b;
            }
        }
        Ok(s)
    }

    /// Row `i` is `softmax(x_i W + b)`.
    pub fn predict(&self, features: &Matrix) -> Result<Matrix> {
        let mut s = self.scores(features)?;
        softmax_rows(&mut s);
        Ok(s)
    }

    /// Mean KL divergence from `targets` to the predictions, and its gradient.
    pub fn loss_and_gradient(&self, features: &Matrix, targets: &Matrix) -> Result<(f64, Gradient)> {
        check_shapes(features, targets)?;
        if targets.ncols() != self.m() {
            return Err(Error::Dimension(format!(
                "model has {} labels, targets have {}",
                self.m(),
                targets.ncols()
            )));
        }
        let n = features.nrows() as f64;
        let scores = self.scores(features)?;
        let mut loss = 0.0;
        let mut p = scores.clone();
        for (i, mut row) in p.row_iter_mut().enumerate() {
            let max = row.max();
            let lse = max + row.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
            for (j, v) in row.iter_mut().enumerate() {
                let t = targets[(i, j)];
                if t > 0.0 {
                    loss += t * (t.ln() - (scores[(i, j)] - lse));
                }
                *v = (*v - lse).exp();
            }
        }
        loss /= n;
        let diff = p - targets;
        let weights = features.transpose() * &diff / n;
        let bias = diff.row_sum().iter().map(|v| v / n).collect();
        Ok((loss, Gradient { weights, bias }))
    }

    fn stepped(&self, g: &Gradient, eta: f64) -> MaxEntModel {
        MaxEntModel {
            weights: &self.weights - &g.weights * eta,
            bias: self.bias.iter().zip(&g.bias).map(|(b, gb)| b - eta * gb).collect(),
            training_log: Vec::new(),
        }
    }
}

fn softmax_rows(s: &mut Matrix) {
    for mut row in s.row_iter_mut() {
        let max = row.max();
        row.apply(|v| *v = (*v - max).exp());
        let z = row.sum();
        row.unscale_mut(z);
    }
}

fn check_shapes(features: &Matrix, targets: &Matrix) -> Result<()> {
    if features.nrows() != targets.nrows() {
        return Err(Error::Dimension(format!(
            "{} feature rows vs {} target rows",
            features.nrows(),
            targets.nrows()
        )));
    }
    if features.nrows() == 0 {
        return Err(Error::Dimension("no training rows".into()));
    }
    for (i, row) in targets.row_iter().enumerate() {
        let sum = row.sum();
        if row.iter().any(|&v| v < 0.0) || (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::LabelSum { row: i, sum });
        }
    }
    Ok(())
}

/// Fits a model from zero weights.
///
/// Stops when the gradient's largest entry falls below `tolerance`, when
/// backtracking cannot find a decreasing step, or after `max_iters` steps.
/// `seed` is accepted for interface uniformity; zero initialization makes it
/// irrelevant.
pub fn fit(features: &Matrix, targets: &Matrix, max_iters: usize, tolerance: f64, _seed: u64) -> Result<MaxEntModel> {
    check_shapes(features, targets)?;
    let mut model = MaxEntModel::zeros(features.ncols(), targets.ncols());
    let (mut loss, mut grad) = model.loss_and_gradient(features, targets)?;
    if !loss.is_finite() {
        return Err(Error::NonFiniteLoss { iteration: 0 });
    }
    model.training_log.push((0, loss));
    let mut eta = 1.0;

    for it in 1..=max_iters {
        let gnorm2 = grad.weights.norm_squared() + grad.bias.iter().map(|v| v * v).sum::<f64>();
        if grad.inf_norm() < tolerance {
            break;
        }
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let candidate = model.stepped(&grad, eta);
            let (l, g) = candidate.loss_and_gradient(features, targets)?;
            if !l.is_finite() {
                return Err(Error::NonFiniteLoss { iteration: it });
            }
            if l <= loss - ARMIJO * eta * gnorm2 {
                accepted = Some((candidate, l, g));
                break;
            }
            eta *= SHRINK;
        }
        let Some((mut next, l, g)) = accepted else {
            log::debug!("line search stalled at iteration {it}, loss {loss}");
            break;
        };
        next.training_log = std::mem::take(&mut model.training_log);
        next.training_log.push((it, l));
        model = next;
        loss = l;
        grad = g;
        // Let the step grow back after a run of easy iterations.
        eta = (eta / SHRINK).min(1e3);
    }
    Ok(model)
}

/// Mean KL divergence `KL(targets_i ‖ predictions_i)`.
pub fn mean_kl(targets: &Matrix, predictions: &Matrix) -> Result<f64> {
    if targets.shape() != predictions.shape() {
        return Err(Error::Dimension(format!(
            "targets {:?} vs predictions {:?}",
            targets.shape(),
            predictions.shape()
        )));
    }
    let total: f64 = targets
        .iter()
        .zip(predictions.iter())
        .filter(|(t, _)| **t > 0.0)
        .map(|(t, p)| t * (t / p).ln())
        .sum();
    Ok(total / targets.nrows() as f64)
}
