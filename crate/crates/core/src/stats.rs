//! One-sided paired Student t-test.

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::metrics::mean_std;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestOutcome {
    pub t_stat: f64,
    pub p_value: f64,
    pub significant: bool,
    pub mean_difference: f64,
    pub degrees_of_freedom: usize,
}

/// `P(T <= t)` for a Student t variable with `dof` degrees of freedom.
pub fn student_t_cdf(t: f64, dof: f64) -> f64 {
    if t == f64::NEG_INFINITY {
        return 0.0;
    }
    if t == f64::INFINITY {
        return 1.0;
    }
    let x = dof / (dof + t * t);
    let tail = 0.5 * beta_reg(dof / 2.0, 0.5, x);
    if t < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// Tests `H1: mean(a - b) < 0` on paired samples.
///
/// Constant differences are a degenerate case: a zero mean gives `t = 0,
/// p = 0.5`; a negative mean is declared significant with `p = 0`.
pub fn paired_ttest_one_sided(scores_a: &[f64], scores_b: &[f64], level: f64) -> Result<TTestOutcome> {
    if scores_a.len() != scores_b.len() {
        return Err(Error::Dimension(format!(
            "{} vs {} paired scores",
            scores_a.len(),
            scores_b.len()
        )));
    }
    let n = scores_a.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 pairs, got {n}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("significance level {level} outside (0, 1)")));
    }
    let diffs: Vec<f64> = scores_a.iter().zip(scores_b).map(|(a, b)| a - b).collect();
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::InvalidArgument("non-finite score".into()));
    }
    let (mean, sd) = mean_std(&diffs);
    let dof = n - 1;

    let (t_stat, p_value) = if sd == 0.0 {
        if mean == 0.0 {
            (0.0, 0.5)
        } else if mean < 0.0 {
            log::debug!("zero-variance paired differences with negative mean; p := 0");
            (f64::NEG_INFINITY, 0.0)
        } else {
            (f64::INFINITY, 1.0)
        }
    } else {
        let t = mean / (sd / (n as f64).sqrt());
        (t, student_t_cdf(t, dof as f64))
    };

    Ok(TTestOutcome {
        t_stat,
        p_value,
        significant: p_value < level,
        mean_difference: mean,
        degrees_of_freedom: dof,
    })
}
