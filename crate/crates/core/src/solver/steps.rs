//! The individual ADMM updates. Each is a plain function so it can be tested
//! against its own oracle.

use crate::data::{HiddenView, Matrix};
use crate::error::{Error, Result};
use crate::graph::SimilarityGraph;

use super::SolverState;

fn same_shape(what: &str, a: &Matrix, b: &Matrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "{what}: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// Gradient of the smooth part of the augmented Lagrangian with respect to `D`:
/// `G D + Λ + Λ' + ρ(D - A) + ρ(D - B)`.
pub fn gradient_d(state: &SolverState, graph: &SimilarityGraph, rho: f64) -> Result<Matrix> {
    same_shape("D vs A", &state.d, &state.a)?;
    same_shape("D vs B", &state.d, &state.b)?;
    same_shape("D vs Λ", &state.d, &state.lambda1)?;
    same_shape("D vs Λ'", &state.d, &state.lambda2)?;
    if graph.n() != state.d.nrows() {
        return Err(Error::Dimension(format!(
            "graph has {} nodes, D has {} rows",
            graph.n(),
            state.d.nrows()
        )));
    }
    let mut grad = &graph.laplacian * &state.d;
    grad += &state.lambda1;
    grad += &state.lambda2;
    grad += (&state.d - &state.a) * rho;
    grad += (&state.d - &state.b) * rho;
    Ok(grad)
}

/// Clamps negative entries to zero and rescales each row to sum to one.
/// Rows with nothing left become uniform.
pub fn project_simplex_rows(d: &Matrix) -> Matrix {
    let mut out = d.map(|v| v.max(0.0));
    let m = out.ncols();
    for mut row in out.row_iter_mut() {
        let sum = row.sum();
        if sum > 0.0 {
            row.unscale_mut(sum);
        } else {
            row.fill(1.0 / m as f64);
        }
    }
    out
}

/// Singular values of `m`, largest first.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Svd("non-finite input".into()));
    }
    let svd = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Svd("did not converge".into()))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Sum of singular values.
pub fn nuclear_norm(m: &Matrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Soft-thresholds the singular values of `m` by `threshold`.
pub fn singular_value_threshold(m: &Matrix, threshold: f64) -> Result<Matrix> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Svd("non-finite input".into()));
    }
    let mut svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Svd("did not converge".into()))?;
    svd.singular_values
        .apply(|s| *s = (*s - threshold).max(0.0));
    svd.recompose().map_err(|e| Error::Svd(e.to_string()))
}

/// Proximal step for the trace-norm copy:
/// `argmin_A ½|A - (D + Λ/ρ)|²_F + (α/ρ)|A|_*`.
pub fn update_a(d: &Matrix, lambda1: &Matrix, alpha: f64, rho: f64) -> Result<Matrix> {
    same_shape("D vs Λ", d, lambda1)?;
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    let target = d + lambda1 / rho;
    if alpha == 0.0 {
        return Ok(target);
    }
    singular_value_threshold(&target, alpha / rho)
}

/// Scaling coefficient of each row:
/// `k_i = Σ_obs (ρ D_ik + Λ'_ik) D°_ik / (ρ Σ_obs D°_ik²)`.
pub fn scaling_coefficients(d: &Matrix, lambda2: &Matrix, hidden: &HiddenView, rho: f64) -> Result<Vec<f64>> {
    same_shape("D vs Λ'", d, lambda2)?;
    same_shape("D vs observed", d, &hidden.observed)?;
    let (n, m) = d.shape();
    (0..n)
        .map(|i| {
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 0..m {
                if hidden.mask.is_observed(i, j) {
                    let o = hidden.observed[(i, j)];
                    num += (rho * d[(i, j)] + lambda2[(i, j)]) * o;
                    den += o * o;
                }
            }
            den *= rho;
            if den > 0.0 {
                Ok(num / den)
            } else {
                Err(Error::ZeroObservedMass { row: i })
            }
        })
        .collect()
}

/// Projection of `D + Λ'/ρ` onto the proportional constraint set.
///
/// Hidden entries keep the unconstrained minimizer; observed entries of row
/// `i` become `k_i · D°_i`. Returns the new `B` and the `k` vector.
pub fn update_b(d: &Matrix, lambda2: &Matrix, hidden: &HiddenView, rho: f64) -> Result<(Matrix, Vec<f64>)> {
    let k = scaling_coefficients(d, lambda2, hidden, rho)?;
    let (n, m) = d.shape();
    let mut b = Matrix::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            b[(i, j)] = if hidden.mask.is_observed(i, j) {
                k[i] * hidden.observed[(i, j)]
            } else {
                d[(i, j)] + lambda2[(i, j)] / rho
            };
        }
    }
    Ok((b, k))
}

/// `B = D + Λ'/ρ` everywhere: the B step once the proportional constraint is dropped.
pub fn update_b_unconstrained(d: &Matrix, lambda2: &Matrix, rho: f64) -> Result<Matrix> {
    same_shape("D vs Λ'", d, lambda2)?;
    Ok(d + lambda2 / rho)
}

/// Dual ascent: `Λ += ρ(D - A)`, `Λ' += ρ(D - B)`.
pub fn update_multipliers(state: &mut SolverState, rho: f64) {
    state.lambda1 += (&state.d - &state.a) * rho;
    state.lambda2 += (&state.d - &state.b) * rho;
}

/// `½ tr(DᵀGD) + α |D|_*`.
pub fn objective_value(d: &Matrix, graph: &SimilarityGraph, alpha: f64) -> Result<f64> {
    let smooth = crate::graph::smoothness_energy(graph, d)?;
    let trace = if alpha == 0.0 { 0.0 } else { nuclear_norm(d)? };
    Ok(0.5 * smooth + alpha * trace)
}
