//! Desk-scale synthetic datasets with low-rank label structure and clustered features.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Matrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    /// Number of prototype distributions.
    pub rank: usize,
    pub noise_feature: f64,
    pub noise_label: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n: 200,
            d: 16,
            m: 6,
            rank: 2,
            noise_feature: 0.05,
            noise_label: 0.02,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.d < 1 || self.m < 2 {
            return Err(Error::InvalidArgument(format!(
                "need n >= 1, d >= 1, m >= 2; got n={}, d={}, m={}",
                self.n, self.d, self.m
            )));
        }
        if self.rank < 1 || self.rank > self.m {
            return Err(Error::InvalidArgument(format!(
                "rank {} outside [1, {}]",
                self.rank, self.m
            )));
        }
        if !(self.noise_feature >= 0.0) || !(self.noise_label >= 0.0) {
            return Err(Error::InvalidArgument("noise levels must be >= 0".into()));
        }
        Ok(())
    }
}

/// A generated dataset plus the prototype each row was drawn around.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub dataset: Dataset,
    pub prototypes: Matrix,
    pub assignment: Vec<usize>,
}

/// Draws `rank` prototype distributions uniformly from the simplex and
/// assigns every row to one of them. Labels are the prototype plus clamped
/// Gaussian noise, renormalized; features are a fixed random linear embedding
/// of the prototype plus Gaussian noise.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let &SyntheticSpec { n, d, m, rank, .. } = spec;

    let mut prototypes = Matrix::zeros(rank, m);
    for mut row in prototypes.row_iter_mut() {
        for v in row.iter_mut() {
            *v = Exp1.sample(&mut rng);
        }
        let s = row.sum();
        row.unscale_mut(s);
    }

    let embedding = Matrix::from_fn(m, d, |_, _| StandardNormal.sample(&mut rng));

    let assignment: Vec<usize> = (0..n).map(|_| rng.random_range(0..rank)).collect();

    let mut labels = Matrix::zeros(n, m);
    for (i, &p) in assignment.iter().enumerate() {
        for j in 0..m {
            let noise: f64 = StandardNormal.sample(&mut rng);
            labels[(i, j)] = (prototypes[(p, j)] + spec.noise_label * noise).max(0.0);
        }
        let s = labels.row(i).sum();
        if s > 0.0 {
            labels.row_mut(i).unscale_mut(s);
        } else {
            labels.set_row(i, &prototypes.row(p));
        }
    }

    let mut features = Matrix::zeros(n, d);
    for (i, &p) in assignment.iter().enumerate() {
        let clean = prototypes.row(p) * &embedding;
        for c in 0..d {
            let noise: f64 = StandardNormal.sample(&mut rng);
            features[(i, c)] = clean[c] + spec.noise_feature * noise;
        }
    }

    Ok(SyntheticDataset {
        dataset: Dataset::new(features, labels)?,
        prototypes,
        assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::knn_lists;

    #[test]
    fn rank_one_without_noise() {
        let spec = SyntheticSpec {
            rank: 1,
            noise_label: 0.0,
            noise_feature: 0.0,
            n: 20,
            ..Default::default()
        };
        let s = generate(&spec).unwrap();
        let first = s.dataset.labels.row(0).into_owned();
        for row in s.dataset.labels.row_iter() {
            assert_eq!(row, first);
        }
        let sv = crate::solver::steps::singular_values(&s.dataset.labels).unwrap();
        assert!(sv[1] < 1e-12 * sv[0]);
    }

    #[test]
    fn clean_features_cluster_by_prototype() {
        let spec = SyntheticSpec {
            noise_feature: 0.0,
            n: 40,
            rank: 3,
            ..Default::default()
        };
        let s = generate(&spec).unwrap();
        for (i, nn) in knn_lists(&s.dataset.features, 1).iter().enumerate() {
            let same = s.assignment.iter().filter(|&&p| p == s.assignment[i]).count();
            if same > 1 {
                assert_eq!(s.assignment[nn[0]], s.assignment[i]);
            }
        }
    }

    #[test]
    fn deterministic_and_on_simplex() {
        let spec = SyntheticSpec::default();
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        for row in a.dataset.labels.row_iter() {
            assert!((row.sum() - 1.0).abs() < 1e-12);
            assert!(row.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn infeasible_specs() {
        assert!(generate(&SyntheticSpec { rank: 0, ..Default::default() }).is_err());
        assert!(generate(&SyntheticSpec { rank: 7, ..Default::default() }).is_err());
        assert!(generate(&SyntheticSpec { m: 1, rank: 1, ..Default::default() }).is_err());
    }
}
