//! The five label-distribution measures and their aggregation.
//!
//! Chebyshev, Clark and Canberra are distances (lower is better); Cosine and
//! Intersection are similarities (higher is better). Clark and Canberra
//! terms where both distributions put zero mass on a label contribute zero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::data::Matrix;
use crate::error::{Error, Result};

const SIMPLEX_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Chebyshev,
    Clark,
    Canberra,
    Cosine,
    Intersection,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::Chebyshev,
        MetricKind::Clark,
        MetricKind::Canberra,
        MetricKind::Cosine,
        MetricKind::Intersection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Chebyshev => "chebyshev",
            MetricKind::Clark => "clark",
            MetricKind::Canberra => "canberra",
            MetricKind::Cosine => "cosine",
            MetricKind::Intersection => "intersection",
        }
    }

    pub fn lower_is_better(self) -> bool {
        matches!(
            self,
            MetricKind::Chebyshev | MetricKind::Clark | MetricKind::Canberra
        )
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

fn check_simplex(v: &[f64], which: &str) -> Result<()> {
    let sum: f64 = v.iter().sum();
    if v.iter().any(|&x| x < -SIMPLEX_TOLERANCE || !x.is_finite()) || (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(Error::InvalidArgument(format!(
            "{which} is not a distribution (sum {sum})"
        )));
    }
    Ok(())
}

/// Scores one predicted distribution against the true one.
pub fn row_metric(kind: MetricKind, d: &[f64], d_hat: &[f64]) -> Result<f64> {
    if d.len() != d_hat.len() {
        return Err(Error::Dimension(format!(
            "distributions of length {} and {}",
            d.len(),
            d_hat.len()
        )));
    }
    check_simplex(d, "true distribution")?;
    check_simplex(d_hat, "predicted distribution")?;
    Ok(row_metric_unchecked(kind, d, d_hat))
}

pub(crate) fn row_metric_unchecked(kind: MetricKind, d: &[f64], d_hat: &[f64]) -> f64 {
    let pairs = d.iter().zip(d_hat);
    match kind {
        MetricKind::Chebyshev => pairs.map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        MetricKind::Clark => pairs
            .map(|(a, b)| {
                let s = a + b;
                if s == 0.0 {
                    0.0
                } else {
                    (a - b) * (a - b) / (s * s)
                }
            })
            .sum::<f64>()
            .sqrt(),
        MetricKind::Canberra => pairs
            .map(|(a, b)| {
                let s = a + b;
                if s == 0.0 {
                    0.0
                } else {
                    (a - b).abs() / s
                }
            })
            .sum(),
        MetricKind::Cosine => {
            let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
            for (a, b) in pairs {
                dot += a * b;
                na += a * a;
                nb += b * b;
            }
            dot / (na.sqrt() * nb.sqrt())
        }
        MetricKind::Intersection => pairs.map(|(a, b)| a.min(*b)).sum(),
    }
}

/// Mean, sample standard deviation and the raw values of one metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricStats {
    pub mean: f64,
    pub std: f64,
    pub per_row: Vec<f64>,
}

impl MetricStats {
    pub fn from_values(values: Vec<f64>) -> Self {
        let (mean, std) = mean_std(&values);
        MetricStats {
            mean,
            std,
            per_row: values,
        }
    }
}

/// Mean and sample (n - 1) standard deviation; the deviation of a single value is 0.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// All five metrics for a pair of label-distribution matrices.
///
/// Serializes with keys in the fixed order chebyshev, clark, canberra,
/// cosine, intersection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub chebyshev: MetricStats,
    pub clark: MetricStats,
    pub canberra: MetricStats,
    pub cosine: MetricStats,
    pub intersection: MetricStats,
    pub n_rows: usize,
}

impl MetricReport {
    pub fn get(&self, kind: MetricKind) -> &MetricStats {
        match kind {
            MetricKind::Chebyshev => &self.chebyshev,
            MetricKind::Clark => &self.clark,
            MetricKind::Canberra => &self.canberra,
            MetricKind::Cosine => &self.cosine,
            MetricKind::Intersection => &self.intersection,
        }
    }

    pub fn mean(&self, kind: MetricKind) -> f64 {
        self.get(kind).mean
    }
}

/// Row-by-row comparison of `recovered` against `truth`.
pub fn evaluate(recovered: &Matrix, truth: &Matrix) -> Result<MetricReport> {
    if recovered.shape() != truth.shape() {
        return Err(Error::Dimension(format!(
            "recovered {:?} vs truth {:?}",
            recovered.shape(),
            truth.shape()
        )));
    }
    let n = truth.nrows();
    let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
        .map(|i| {
            let t: Vec<f64> = truth.row(i).iter().copied().collect();
            let r: Vec<f64> = recovered.row(i).iter().copied().collect();
            check_simplex(&t, &format!("truth row {i}"))?;
            check_simplex(&r, &format!("recovered row {i}"))?;
            Ok((t, r))
        })
        .collect::<Result<_>>()?;
    let column = |kind| {
        MetricStats::from_values(
            rows.iter()
                .map(|(t, r)| row_metric_unchecked(kind, t, r))
                .collect(),
        )
    };
    Ok(MetricReport {
        chebyshev: column(MetricKind::Chebyshev),
        clark: column(MetricKind::Clark),
        canberra: column(MetricKind::Canberra),
        cosine: column(MetricKind::Cosine),
        intersection: column(MetricKind::Intersection),
        n_rows: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use MetricKind::*;

    #[test]
    fn identical_rows() {
        let d = [0.2, 0.3, 0.5];
        assert_eq!(row_metric(Chebyshev, &d, &d).unwrap(), 0.0);
        assert_eq!(row_metric(Clark, &d, &d).unwrap(), 0.0);
        assert_eq!(row_metric(Canberra, &d, &d).unwrap(), 0.0);
        assert_relative_eq!(row_metric(Cosine, &d, &d).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(row_metric(Intersection, &d, &d).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn disjoint_rows() {
        let (a, b) = ([1.0, 0.0], [0.0, 1.0]);
        assert_eq!(row_metric(Chebyshev, &a, &b).unwrap(), 1.0);
        assert_relative_eq!(row_metric(Clark, &a, &b).unwrap(), 2f64.sqrt());
        assert_eq!(row_metric(Canberra, &a, &b).unwrap(), 2.0);
        assert_eq!(row_metric(Cosine, &a, &b).unwrap(), 0.0);
        assert_eq!(row_metric(Intersection, &a, &b).unwrap(), 0.0);
    }

    #[test]
    fn close_rows() {
        let (a, b) = ([0.6, 0.4], [0.5, 0.5]);
        assert_relative_eq!(row_metric(Chebyshev, &a, &b).unwrap(), 0.1, epsilon = 1e-15);
        assert_relative_eq!(row_metric(Canberra, &a, &b).unwrap(), 0.1 / 1.1 + 0.1 / 0.9, epsilon = 1e-15);
        assert_relative_eq!(row_metric(Canberra, &a, &b).unwrap(), 0.20202, epsilon = 1e-5);
        assert_relative_eq!(row_metric(Intersection, &a, &b).unwrap(), 0.9, epsilon = 1e-15);
    }

    #[test]
    fn input_errors() {
        assert!(row_metric(Chebyshev, &[0.5, 0.5], &[1.0]).is_err());
        assert!(row_metric(Chebyshev, &[0.5, 0.6], &[0.5, 0.5]).is_err());
        let a = Matrix::from_row_slice(1, 2, &[0.5, 0.5]);
        assert!(evaluate(&a, &Matrix::from_row_slice(2, 1, &[1.0, 1.0])).is_err());
    }

    #[test]
    fn evaluate_single_row_and_identity() {
        let t = Matrix::from_row_slice(1, 2, &[0.6, 0.4]);
        let r = Matrix::from_row_slice(1, 2, &[0.5, 0.5]);
        let rep = evaluate(&r, &t).unwrap();
        assert_eq!(rep.n_rows, 1);
        assert_eq!(rep.canberra.std, 0.0);
        assert_eq!(rep.canberra.mean, row_metric(Canberra, &[0.6, 0.4], &[0.5, 0.5]).unwrap());

        let t = Matrix::from_row_slice(2, 3, &[0.2, 0.3, 0.5, 1.0, 0.0, 0.0]);
        let rep = evaluate(&t, &t).unwrap();
        for k in [Chebyshev, Clark, Canberra] {
            assert_eq!(rep.mean(k), 0.0);
        }
        for k in [Cosine, Intersection] {
            assert_relative_eq!(rep.mean(k), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn row_permutation_keeps_means() {
        let t = Matrix::from_row_slice(3, 2, &[0.2, 0.8, 0.5, 0.5, 0.9, 0.1]);
        let r = Matrix::from_row_slice(3, 2, &[0.3, 0.7, 0.4, 0.6, 0.6, 0.4]);
        let perm = [2, 0, 1];
        let a = evaluate(&r, &t).unwrap();
        let b = evaluate(&r.select_rows(&perm), &t.select_rows(&perm)).unwrap();
        for k in MetricKind::ALL {
            assert_relative_eq!(a.mean(k), b.mean(k), epsilon = 1e-15);
        }
    }

    #[test]
    fn json_key_order() {
        let t = Matrix::from_row_slice(1, 2, &[0.6, 0.4]);
        let json = serde_json::to_string(&evaluate(&t, &t).unwrap()).unwrap();
        let pos: Vec<usize> = MetricKind::ALL
            .iter()
            .map(|k| json.find(&format!("\"{}\"", k.name())).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{json}");
    }
}
