use serde::Serialize;

use crate::data::{HiddenView, Matrix};
use crate::error::{Error, Result};

use super::RecoveryResult;

/// Scaling-coefficient error of one row against its recovery bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowBound {
    pub row: usize,
    /// `1 / Σ_obs D^g_ik`.
    pub k_truth: f64,
    pub k_recovered: f64,
    pub squared_error: f64,
    /// `1 - Σ_obs D_ik`, recovered mass on hidden positions.
    pub sigma: f64,
    /// `σ² / (Σ_obs D^g_ik)²`.
    pub epsilon: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub rows: Vec<RowBound>,
    pub violating_rows: Vec<usize>,
}

impl BoundReport {
    /// Share of rows whose squared coefficient error stays within the bound.
    pub fn fraction_within(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        1.0 - self.violating_rows.len() as f64 / self.rows.len() as f64
    }
}

/// Compares recovered scaling coefficients with the ground-truth ones and the
/// per-row bound `σ_i² / (observed ground-truth mass)²`.
pub fn recovery_bound_diagnostics(
    result: &RecoveryResult,
    hidden: &HiddenView,
    ground_truth: &Matrix,
) -> Result<BoundReport> {
    let shape = hidden.observed.shape();
    if ground_truth.shape() != shape || result.recovered.shape() != shape {
        return Err(Error::Dimension(format!(
            "ground truth {:?}, recovered {:?}, observation {:?}",
            ground_truth.shape(),
            result.recovered.shape(),
            shape
        )));
    }
    if result.scaling_coefficients.len() != shape.0 {
        return Err(Error::Dimension(format!(
            "{} scaling coefficients for {} rows",
            result.scaling_coefficients.len(),
            shape.0
        )));
    }
    let (n, m) = shape;
    let mut rows = Vec::with_capacity(n);
    let mut violating_rows = Vec::new();
    for i in 0..n {
        let mut truth_mass = 0.0;
        let mut recovered_mass = 0.0;
        for j in 0..m {
            if hidden.mask.is_observed(i, j) {
                truth_mass += ground_truth[(i, j)];
                recovered_mass += result.recovered[(i, j)];
            }
        }
        if !(truth_mass > 0.0) {
            return Err(Error::ZeroObservedMass { row: i });
        }
        let k_truth = 1.0 / truth_mass;
        let k_recovered = result.scaling_coefficients[i];
        let squared_error = (k_truth - k_recovered).powi(2);
        let sigma = 1.0 - recovered_mass;
        let epsilon = sigma * sigma / (truth_mass * truth_mass);
        let violated = squared_error > epsilon;
        if violated {
            violating_rows.push(i);
        }
        rows.push(RowBound {
            row: i,
            k_truth,
            k_recovered,
            squared_error,
            sigma,
            epsilon,
            violated,
        });
    }
    Ok(BoundReport { rows, violating_rows })
}
