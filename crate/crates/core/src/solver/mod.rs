//! ADMM recovery of complete label distributions.
//!
//! The solver minimizes
//!
//! ```text
//! ½ tr(DᵀGD) + α |D|_*
//! s.t. rows of D on the probability simplex,
//!      D restricted to observed entries is proportional (row-wise) to D°
//! ```
//!
//! by splitting `D` into a trace-norm copy `A` and a constrained copy `B`.
//! Every iteration takes a single projected gradient step on `D`, a
//! singular value thresholding step on `A`, a closed-form projection for `B`
//! and a dual ascent step on both multipliers. The loop stops once
//! `max(|D - A|_∞, |D - B|_∞)` drops below the tolerance or the iteration
//! budget runs out.

mod bound;
pub mod steps;

use serde::{Deserialize, Serialize};

use crate::data::{HiddenView, Matrix};
use crate::error::{Error, Result};
use crate::graph::SimilarityGraph;

pub use bound::{recovery_bound_diagnostics, BoundReport, RowBound};
pub use steps::{
    gradient_d, objective_value, project_simplex_rows, update_a, update_b, update_multipliers,
};

/// How far the single gradient step on `D` moves each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepSize {
    /// `1 / (λ_max(G) + 2ρ)`, the inverse Lipschitz constant of the smooth part.
    InverseLipschitz,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Trace-norm weight.
    pub alpha: f64,
    /// Augmented Lagrangian penalty, held fixed for the whole run.
    pub rho: f64,
    pub max_iterations: usize,
    pub residual_tolerance: f64,
    pub step: StepSize,
    /// Power iterations used to estimate `λ_max(G)`.
    pub power_iterations: usize,
    /// Enforce the proportional constraint on `B`. Off for the "w/o Cons" ablation.
    pub use_constraint: bool,
    /// Unused by the deterministic solver; carried for provenance.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            alpha: 0.25,
            rho: 2.0,
            max_iterations: 100,
            residual_tolerance: 1e-3,
            step: StepSize::InverseLipschitz,
            power_iterations: 50,
            use_constraint: true,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::InvalidArgument(format!("rho must be > 0, got {}", self.rho)));
        }
        if !(self.residual_tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "residual tolerance must be > 0, got {}",
                self.residual_tolerance
            )));
        }
        if let StepSize::Fixed(eta) = self.step {
            if !(eta > 0.0) || !eta.is_finite() {
                return Err(Error::InvalidArgument(format!("step size must be > 0, got {eta}")));
            }
        }
        Ok(())
    }
}

/// Iterates and multipliers of the ADMM loop.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub d: Matrix,
    pub a: Matrix,
    pub b: Matrix,
    /// Multiplier of `D = A`.
    pub lambda1: Matrix,
    /// Multiplier of `D = B`.
    pub lambda2: Matrix,
    pub iteration: usize,
    /// `(|D - A|_∞, |D - B|_∞)` after every iteration.
    pub residual_history: Vec<(f64, f64)>,
    pub objective_history: Vec<f64>,
}

impl SolverState {
    /// `A = B = Λ = Λ' = 1`, `D = D°`.
    pub fn initial(hidden: &HiddenView) -> Self {
        let (n, m) = hidden.observed.shape();
        let ones = Matrix::from_element(n, m, 1.0);
        SolverState {
            d: hidden.observed.clone(),
            a: ones.clone(),
            b: ones.clone(),
            lambda1: ones.clone(),
            lambda2: ones,
            iteration: 0,
            residual_history: Vec::new(),
            objective_history: Vec::new(),
        }
    }
}

/// Induced ∞-norm: the largest absolute row sum.
pub fn inf_norm(m: &Matrix) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// One line of the solver trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub residual_da: f64,
    pub residual_db: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    /// Final `D`; rows on the simplex.
    pub recovered: Matrix,
    /// `k_i` from the last `B` step.
    pub scaling_coefficients: Vec<f64>,
    pub converged: bool,
    pub iterations_used: usize,
    pub final_residuals: (f64, f64),
    pub step_size: f64,
    /// Everything the loop ended with, histories included.
    pub state: SolverState,
}

impl RecoveryResult {
    pub fn trace(&self) -> Vec<IterationRecord> {
        self.state
            .residual_history
            .iter()
            .zip(&self.state.objective_history)
            .enumerate()
            .map(|(t, (&(da, db), &objective))| IterationRecord {
                iteration: t + 1,
                residual_da: da,
                residual_db: db,
                objective,
            })
            .collect()
    }
}

fn check_finite(m: &Matrix, iteration: usize, stage: &'static str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { iteration, stage })
    }
}

/// Runs the ADMM loop from the standard initialization.
pub fn solve(hidden: &HiddenView, graph: &SimilarityGraph, config: &SolverConfig) -> Result<RecoveryResult> {
    config.validate()?;
    if graph.n() != hidden.n() {
        return Err(Error::Dimension(format!(
            "graph has {} nodes but the observation has {} rows",
            graph.n(),
            hidden.n()
        )));
    }
    let rho = config.rho;
    let eta = match config.step {
        StepSize::InverseLipschitz => {
            1.0 / (graph.largest_eigenvalue(config.power_iterations).max(0.0) + 2.0 * rho)
        }
        StepSize::Fixed(eta) => eta,
    };

    let mut state = SolverState::initial(hidden);
    let mut k = steps::scaling_coefficients(&state.d, &state.lambda2, hidden, rho)?;
    let mut converged = false;

    while state.iteration < config.max_iterations {
        let t = state.iteration + 1;

        let grad = gradient_d(&state, graph, rho)?;
        let moved = &state.d - grad * eta;
        // The projection's clamp would silently turn NaN into 0.
        check_finite(&moved, t, "D step")?;
        state.d = project_simplex_rows(&moved);

        state.a = update_a(&state.d, &state.lambda1, config.alpha, rho).map_err(|e| match e {
            Error::Svd(_) => Error::NonFinite { iteration: t, stage: "A step" },
            other => other,
        })?;
        check_finite(&state.a, t, "A step")?;

        if config.use_constraint {
            let (b, coeffs) = update_b(&state.d, &state.lambda2, hidden, rho)?;
            state.b = b;
            k = coeffs;
        } else {
            k = steps::scaling_coefficients(&state.d, &state.lambda2, hidden, rho)?;
            state.b = steps::update_b_unconstrained(&state.d, &state.lambda2, rho)?;
        }
        check_finite(&state.b, t, "B step")?;

        update_multipliers(&mut state, rho);
        check_finite(&state.lambda1, t, "multiplier step")?;
        check_finite(&state.lambda2, t, "multiplier step")?;

        let residuals = (inf_norm(&(&state.d - &state.a)), inf_norm(&(&state.d - &state.b)));
        let objective = objective_value(&state.d, graph, config.alpha)?;
        if !objective.is_finite() {
            return Err(Error::NonFinite { iteration: t, stage: "objective" });
        }
        state.residual_history.push(residuals);
        state.objective_history.push(objective);
        state.iteration = t;

        if residuals.0.max(residuals.1) < config.residual_tolerance {
            converged = true;
            break;
        }
    }

    let final_residuals = state
        .residual_history
        .last()
        .copied()
        .unwrap_or((f64::INFINITY, f64::INFINITY));
    Ok(RecoveryResult {
        recovered: state.d.clone(),
        scaling_coefficients: k,
        converged,
        iterations_used: state.iteration,
        final_residuals,
        step_size: eta,
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{hide, Mask};
    use crate::graph::build_graph;

    #[test]
    fn rejects_bad_config_and_shapes() {
        let labels = Matrix::from_row_slice(2, 2, &[0.5, 0.5, 0.2, 0.8]);
        let view = hide(&labels, &Mask::all_observed(2, 2)).unwrap();
        let g = build_graph(&Matrix::from_row_slice(2, 1, &[0.0, 1.0]), 1, 1.0).unwrap();
        let bad = SolverConfig { rho: 0.0, ..Default::default() };
        assert!(solve(&view, &g, &bad).is_err());
        let g3 = build_graph(&Matrix::from_row_slice(3, 1, &[0.0, 1.0, 2.0]), 1, 1.0).unwrap();
        assert!(matches!(solve(&view, &g3, &SolverConfig::default()), Err(Error::Dimension(_))));
    }

    #[test]
    fn zero_iterations_returns_observation() {
        let labels = Matrix::from_row_slice(2, 2, &[0.5, 0.5, 0.2, 0.8]);
        let view = hide(&labels, &Mask::all_observed(2, 2)).unwrap();
        let g = build_graph(&Matrix::from_row_slice(2, 1, &[0.0, 1.0]), 1, 1.0).unwrap();
        let cfg = SolverConfig { max_iterations: 0, ..Default::default() };
        let r = solve(&view, &g, &cfg).unwrap();
        assert_eq!(r.recovered, labels);
        assert!(!r.converged);
    }

    #[test]
    fn blow_up_is_reported_with_iteration() {
        let labels = Matrix::from_row_slice(3, 2, &[0.5, 0.5, 0.2, 0.8, 0.9, 0.1]);
        let view = hide(&labels, &Mask::all_observed(3, 2)).unwrap();
        let mut g = build_graph(&Matrix::from_row_slice(3, 1, &[0.0, 1.0, 2.0]), 1, 1.0).unwrap();
        g.laplacian[(0, 1)] = f64::NAN;
        let cfg = SolverConfig { step: StepSize::Fixed(0.1), ..Default::default() };
        match solve(&view, &g, &cfg) {
            Err(Error::NonFinite { iteration, stage }) => assert_eq!((iteration, stage), (1, "D step")),
            other => panic!("expected a non-finite error, got {other:?}"),
        }
    }
}
