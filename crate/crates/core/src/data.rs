//! Datasets, masks and the hidden-label view.
//!
//! A [`Dataset`] pairs a feature matrix with a ground-truth label-distribution
//! matrix whose rows lie on the probability simplex. Hiding labels is a two
//! step affair: [`generate_mask`] decides which entries the annotator never
//! saw, and [`hide`] rescales the surviving entries of every row so that they
//! sum to one again. The result, a [`HiddenView`], looks like an ordinary
//! complete label distribution and is the only thing the recovery solver sees.

use std::path::Path;

use log::{debug, warn};
use nalgebra::DMatrix;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;

/// Rows whose sum is within this distance of 1 are accepted as they are.
pub const SUM_TOLERANCE: f64 = 1e-6;
/// Rows whose sum is off by less than this are renormalized with a warning.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-3;

/// Feature matrix plus ground-truth label distributions, one row per instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Matrix,
    pub labels: Matrix,
    pub names: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset, checking that every label row is a distribution.
    pub fn new(features: Matrix, labels: Matrix) -> Result<Self> {
        if features.nrows() != labels.nrows() {
            return Err(Error::Dimension(format!(
                "features have {} rows but labels have {}",
                features.nrows(),
                labels.nrows()
            )));
        }
        if labels.nrows() == 0 {
            return Err(Error::Dimension("dataset has no rows".into()));
        }
        if labels.ncols() < 2 {
            return Err(Error::Dimension(format!(
                "need at least 2 labels, got {}",
                labels.ncols()
            )));
        }
        check_distribution_rows(&labels, SUM_TOLERANCE)?;
        Ok(Dataset {
            features,
            labels,
            names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.m() {
            return Err(Error::Dimension(format!(
                "{} label names for {} labels",
                names.len(),
                self.m()
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.labels.nrows()
    }

    pub fn d(&self) -> usize {
        self.features.ncols()
    }

    pub fn m(&self) -> usize {
        self.labels.ncols()
    }

    /// Copies the given rows, in the given order, into a new dataset.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(rows),
            labels: self.labels.select_rows(rows),
            names: self.names.clone(),
        }
    }
}

/// Checks that every row is nonnegative and sums to one within [`SUM_TOLERANCE`].
pub fn validate_labels(labels: &Matrix) -> Result<()> {
    check_distribution_rows(labels, SUM_TOLERANCE)
}

fn check_distribution_rows(labels: &Matrix, tolerance: f64) -> Result<()> {
    for (i, row) in labels.row_iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(Error::NegativeLabel {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
        let sum = row.sum();
        if (sum - 1.0).abs() > tolerance {
            return Err(Error::LabelSum {
                row: i,
                sum: display_sum(sum),
            });
        }
    }
    Ok(())
}

// 0.7 + 0.2 prints as 0.8999999999999999 otherwise.
fn display_sum(sum: f64) -> f64 {
    (sum * 1e9).round() / 1e9
}

/// Which entries of the ground truth the annotator saw.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    pub entries: DMatrix<bool>,
    /// Requested fraction of hidden entries (the realized fraction for masks read from disk).
    pub missing_rate: f64,
    pub seed: Option<u64>,
    /// Rows where the positivity repair pass un-hid an entry.
    pub repaired_rows: Vec<usize>,
}

impl Mask {
    pub fn all_observed(n: usize, m: usize) -> Self {
        Mask {
            entries: DMatrix::from_element(n, m, true),
            missing_rate: 0.0,
            seed: None,
            repaired_rows: Vec::new(),
        }
    }

    /// Wraps an explicit 0/1 pattern, recording its realized missing rate.
    pub fn from_entries(entries: DMatrix<bool>) -> Self {
        let total = entries.len().max(1);
        let hidden = entries.iter().filter(|&&o| !o).count();
        Mask {
            entries,
            missing_rate: hidden as f64 / total as f64,
            seed: None,
            repaired_rows: Vec::new(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    #[inline]
    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.entries[(i, j)]
    }

    pub fn hidden_count(&self) -> usize {
        self.entries.iter().filter(|&&o| !o).count()
    }

    /// The mask as a 0.0/1.0 matrix.
    pub fn to_matrix(&self) -> Matrix {
        self.entries.map(|o| if o { 1.0 } else { 0.0 })
    }

    /// Interprets nonzero entries as observed.
    pub fn from_matrix(values: &Matrix) -> Result<Self> {
        for &v in values.iter() {
            if v != 0.0 && v != 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "mask entries must be 0 or 1, found {v}"
                )));
            }
        }
        Ok(Mask::from_entries(values.map(|v| v == 1.0)))
    }

    /// Stable fingerprint of the observed pattern.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update((self.nrows() as u64).to_le_bytes());
        hasher.update((self.ncols() as u64).to_le_bytes());
        for i in 0..self.nrows() {
            let row: Vec<u8> = (0..self.ncols())
                .map(|j| self.entries[(i, j)] as u8)
                .collect();
            hasher.update(&row);
        }
        hex::encode(hasher.finalize())
    }
}

/// Hides `round(missing_rate * n * m)` entries chosen uniformly at random,
/// then makes sure every row keeps at least one observed positive entry.
///
/// A row left without one gets a single positive-valued entry un-hidden,
/// chosen uniformly among that row's positive entries.
pub fn generate_mask(labels: &Matrix, missing_rate: f64, seed: u64) -> Result<Mask> {
    if !(0.0..1.0).contains(&missing_rate) {
        return Err(Error::InvalidArgument(format!(
            "missing rate must lie in [0, 1), got {missing_rate}"
        )));
    }
    let (n, m) = labels.shape();
    for (i, row) in labels.row_iter().enumerate() {
        if !row.iter().any(|&v| v > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "label row {i} has no positive entry; cannot keep one observed"
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = n * m;
    let to_hide = (missing_rate * total as f64).round() as usize;

    // Row-major cell indices.
    let mut cells: Vec<usize> = (0..total).collect();
    cells.shuffle(&mut rng);
    let mut entries = DMatrix::from_element(n, m, true);
    for &cell in &cells[..to_hide] {
        entries[(cell / m, cell % m)] = false;
    }

    let mut repaired_rows = Vec::new();
    for i in 0..n {
        let has_positive = (0..m).any(|j| entries[(i, j)] && labels[(i, j)] > 0.0);
        if has_positive {
            continue;
        }
        let positive: Vec<usize> = (0..m).filter(|&j| labels[(i, j)] > 0.0).collect();
        let &j = positive
            .choose(&mut rng)
            .expect("rows were checked for a positive entry");
        entries[(i, j)] = true;
        debug!("mask repair: row {i} un-hid column {j}");
        repaired_rows.push(i);
    }

    Ok(Mask {
        entries,
        missing_rate,
        seed: Some(seed),
        repaired_rows,
    })
}

/// The observed, renormalized label distributions together with their mask.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenView {
    pub observed: Matrix,
    pub mask: Mask,
}

impl HiddenView {
    /// Validates an externally supplied observation (e.g. read from CSV).
    pub fn new(observed: Matrix, mask: Mask) -> Result<Self> {
        if observed.shape() != mask.entries.shape() {
            return Err(Error::Dimension(format!(
                "observed matrix is {:?} but mask is {:?}",
                observed.shape(),
                mask.entries.shape()
            )));
        }
        for i in 0..observed.nrows() {
            let mut mass = 0.0;
            for j in 0..observed.ncols() {
                let v = observed[(i, j)];
                if !mask.is_observed(i, j) && v != 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "observed[{i},{j}] = {v} at a hidden position"
                    )));
                }
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidArgument(format!(
                        "observed[{i},{j}] = {v} outside [0, 1]"
                    )));
                }
                mass += v;
            }
            if mass <= 0.0 {
                return Err(Error::ZeroObservedMass { row: i });
            }
            if (mass - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::LabelSum {
                    row: i,
                    sum: display_sum(mass),
                });
            }
        }
        Ok(HiddenView { observed, mask })
    }

    pub fn n(&self) -> usize {
        self.observed.nrows()
    }

    pub fn m(&self) -> usize {
        self.observed.ncols()
    }
}

/// Zeroes hidden entries and rescales each row's observed entries to sum to one.
pub fn hide(labels: &Matrix, mask: &Mask) -> Result<HiddenView> {
    if labels.shape() != mask.entries.shape() {
        return Err(Error::Dimension(format!(
            "labels are {:?} but mask is {:?}",
            labels.shape(),
            mask.entries.shape()
        )));
    }
    let (n, m) = labels.shape();
    let mut observed = Matrix::zeros(n, m);
    for i in 0..n {
        let mass: f64 = (0..m)
            .filter(|&j| mask.is_observed(i, j))
            .map(|j| labels[(i, j)])
            .sum();
        if !(mass > 0.0) {
            return Err(Error::ZeroObservedMass { row: i });
        }
        for j in 0..m {
            if mask.is_observed(i, j) {
                observed[(i, j)] = labels[(i, j)] / mass;
            }
        }
    }
    Ok(HiddenView {
        observed,
        mask: mask.clone(),
    })
}

/// Shuffled partition of `0..n` into `round(n * train_fraction)` training
/// indices and the rest.
pub fn split_indices(n: usize, train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let train_len = (n as f64 * train_fraction).round() as usize;
    if train_len == 0 || train_len >= n {
        return Err(Error::InvalidArgument(format!(
            "splitting {n} rows at {train_fraction} leaves an empty partition"
        )));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test = idx.split_off(train_len);
    Ok((idx, test))
}

pub fn train_test_split(dataset: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(dataset.n(), train_fraction, seed)?;
    Ok((dataset.select_rows(&train), dataset.select_rows(&test)))
}

/// Column-wise z-score; constant columns are only centered.
pub fn zscore(features: &Matrix) -> Matrix {
    let n = features.nrows() as f64;
    let mut out = features.clone();
    for mut col in out.column_iter_mut() {
        let mean = col.sum() / n;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        for v in col.iter_mut() {
            *v -= mean;
            if sd > 0.0 {
                *v /= sd;
            }
        }
    }
    out
}

/// Reads a headerless, comma-separated numeric table.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut data = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Ragged {
                path: path.to_path_buf(),
                row,
                found: record.len(),
                expected,
            });
        }
        for (col, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                path: path.to_path_buf(),
                row,
                col,
                cell: cell.to_string(),
            })?;
            data.push(v);
        }
        rows += 1;
    }
    Ok(Matrix::from_row_slice(rows, width.unwrap_or(0), &data))
}

/// Writes a matrix as headerless CSV using shortest round-trip formatting.
pub fn write_matrix(path: impl AsRef<Path>, matrix: &Matrix) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    for row in matrix.row_iter() {
        writer.write_record(row.iter().map(|v| v.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<Mask> {
    Mask::from_matrix(&read_matrix(path)?)
}

pub fn write_mask(path: impl AsRef<Path>, mask: &Mask) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    for i in 0..mask.nrows() {
        writer.write_record((0..mask.ncols()).map(|j| if mask.is_observed(i, j) { "1" } else { "0" }))?;
    }
    writer.flush()?;
    Ok(())
}

/// Loads features and labels from two headerless CSV files.
///
/// Label rows that miss a unit sum by less than [`RENORMALIZE_TOLERANCE`] are
/// rescaled, with a warning beyond [`SUM_TOLERANCE`]; anything further off is
/// treated as corrupt.
pub fn load_dataset(features_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<Dataset> {
    let features = read_matrix(features_path)?;
    let mut labels = read_matrix(labels_path)?;
    if features.nrows() != labels.nrows() {
        return Err(Error::Dimension(format!(
            "features have {} rows but labels have {}",
            features.nrows(),
            labels.nrows()
        )));
    }
    for i in 0..labels.nrows() {
        for j in 0..labels.ncols() {
            let v = labels[(i, j)];
            if !(v >= 0.0) {
                return Err(Error::NegativeLabel {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
        let sum = labels.row(i).sum();
        let off = (sum - 1.0).abs();
        if off >= RENORMALIZE_TOLERANCE {
            return Err(Error::LabelSum {
                row: i,
                sum: display_sum(sum),
            });
        }
        if off > SUM_TOLERANCE {
            warn!("label row {i} sums to {sum}; renormalizing");
        }
        if off > 0.0 {
            labels.row_mut(i).unscale_mut(sum);
        }
    }
    Dataset::new(features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::io::Write;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    }

    #[test]
    fn loads_small_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let f = write(&dir, "x.csv", "1,2,3\n4,5,6\n");
        let l = write(&dir, "y.csv", "0.5,0.5\r\n1.0,0.0\r\n");
        let ds = load_dataset(&f, &l).unwrap();
        assert_eq!((ds.n(), ds.d(), ds.m()), (2, 3, 2));
        assert_eq!(ds.labels[(1, 0)], 1.0);
    }

    #[test]
    fn renormalizes_rows_in_tolerance_band() {
        let dir = tempfile::tempdir().unwrap();
        let f = write(&dir, "x.csv", "1\n2\n");
        let l = write(&dir, "y.csv", "0.5000004,0.4999996\n0.5000004,0.5000004\n");
        let ds = load_dataset(&f, &l).unwrap();
        assert_relative_eq!(ds.labels.row(0).sum(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(ds.labels.row(1).sum(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(ds.labels[(1, 0)], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn rejects_corrupt_rows() {
        let dir = tempfile::tempdir().unwrap();
        let f = write(&dir, "x.csv", "1\n");
        let l = write(&dir, "y.csv", "0.7,0.2\n");
        let err = load_dataset(&f, &l).unwrap_err();
        assert!(err.to_string().contains("row sum 0.9 outside tolerance"), "{err}");

        let l = write(&dir, "neg.csv", "1.2,-0.2\n");
        assert!(matches!(load_dataset(&f, &l), Err(Error::NegativeLabel { .. })));

        let l = write(&dir, "txt.csv", "0.5,abc\n");
        assert!(matches!(load_dataset(&f, &l), Err(Error::NonNumeric { col: 1, .. })));

        let f2 = write(&dir, "x2.csv", "1\n2\n");
        let l = write(&dir, "ok.csv", "0.5,0.5\n");
        assert!(matches!(load_dataset(&f2, &l), Err(Error::Dimension(_))));
    }

    #[test]
    fn zero_rate_mask_is_full() {
        let labels = Matrix::from_row_slice(2, 3, &[0.2, 0.3, 0.5, 1.0, 0.0, 0.0]);
        let mask = generate_mask(&labels, 0.0, 7).unwrap();
        assert!(mask.entries.iter().all(|&o| o));
    }

    #[test]
    fn mask_keeps_one_entry_of_uniform_row() {
        let labels = Matrix::from_row_slice(1, 4, &[0.25; 4]);
        for seed in 0..50 {
            let mask = generate_mask(&labels, 0.75, seed).unwrap();
            assert_eq!(mask.hidden_count(), 3);
        }
    }

    #[test]
    fn mask_repairs_rows_without_positive_observation() {
        // One positive entry per row and heavy masking forces repairs.
        let mut labels = Matrix::zeros(30, 5);
        for i in 0..30 {
            labels[(i, i % 5)] = 1.0;
        }
        let mask = generate_mask(&labels, 0.9, 3).unwrap();
        for i in 0..30 {
            assert!(mask.is_observed(i, i % 5));
        }
        let target = (0.9_f64 * 150.0).round() as usize;
        assert_eq!(target - mask.hidden_count(), mask.repaired_rows.len());
    }

    #[test]
    fn mask_errors() {
        let labels = Matrix::from_row_slice(1, 2, &[0.5, 0.5]);
        assert!(generate_mask(&labels, 1.0, 0).is_err());
        let zero = Matrix::zeros(1, 2);
        assert!(generate_mask(&zero, 0.5, 0).is_err());
    }

    #[test]
    fn mask_is_deterministic() {
        let labels = Matrix::from_element(20, 6, 1.0 / 6.0);
        assert_eq!(generate_mask(&labels, 0.5, 11).unwrap(), generate_mask(&labels, 0.5, 11).unwrap());
    }

    #[test]
    fn hide_scene_example() {
        let labels = Matrix::from_row_slice(1, 6, &[0.52, 0.14, 0.07, 0.15, 0.03, 0.18]);
        let mut entries = DMatrix::from_element(1, 6, true);
        entries[(0, 1)] = false;
        entries[(0, 5)] = false;
        let view = hide(&labels, &Mask::from_entries(entries)).unwrap();
        let expected = [0.52 / 0.77, 0.0, 0.07 / 0.77, 0.15 / 0.77, 0.03 / 0.77, 0.0];
        let rounded = [0.6753, 0.0, 0.0909, 0.1948, 0.0390, 0.0];
        for j in 0..6 {
            assert_relative_eq!(view.observed[(0, j)], expected[j], epsilon = 1e-12);
            assert!((view.observed[(0, j)] - rounded[j]).abs() < 5e-5);
        }
        assert_eq!(view.observed[(0, 1)], 0.0);
    }

    #[test]
    fn hide_full_mask_is_identity() {
        let labels = Matrix::from_row_slice(2, 3, &[0.2, 0.3, 0.5, 0.1, 0.1, 0.8]);
        let view = hide(&labels, &Mask::all_observed(2, 3)).unwrap();
        assert_eq!(view.observed, labels);
    }

    #[test]
    fn hide_single_entry_becomes_one() {
        let labels = Matrix::from_row_slice(1, 3, &[0.2, 0.3, 0.5]);
        let entries = DMatrix::from_row_slice(1, 3, &[false, true, false]);
        let view = hide(&labels, &Mask::from_entries(entries)).unwrap();
        assert_eq!(view.observed[(0, 1)], 1.0);
    }

    #[test]
    fn hide_rejects_zero_mass() {
        let labels = Matrix::from_row_slice(1, 3, &[0.0, 0.3, 0.7]);
        let entries = DMatrix::from_row_slice(1, 3, &[true, false, false]);
        assert!(matches!(
            hide(&labels, &Mask::from_entries(entries)),
            Err(Error::ZeroObservedMass { row: 0 })
        ));
    }

    #[test]
    fn split_sizes_and_determinism() {
        let (a, b) = split_indices(10, 0.8, 1).unwrap();
        assert_eq!((a.len(), b.len()), (8, 2));
        let (a, b) = split_indices(5, 0.8, 1).unwrap();
        assert_eq!((a.len(), b.len()), (4, 1));
        assert_eq!(split_indices(50, 0.8, 9).unwrap(), split_indices(50, 0.8, 9).unwrap());
        assert!(split_indices(1, 0.8, 0).is_err());
        assert!(split_indices(10, 1.0, 0).is_err());

        let (mut all, test) = split_indices(37, 0.8, 4).unwrap();
        all.extend(test);
        all.sort_unstable();
        assert_eq!(all, (0..37).collect::<Vec<_>>());
    }

    #[test]
    fn hidden_view_validation() {
        let mask = Mask::from_entries(DMatrix::from_row_slice(1, 2, &[true, false]));
        assert!(HiddenView::new(Matrix::from_row_slice(1, 2, &[1.0, 0.0]), mask.clone()).is_ok());
        assert!(HiddenView::new(Matrix::from_row_slice(1, 2, &[0.5, 0.5]), mask.clone()).is_err());
        assert!(HiddenView::new(Matrix::from_row_slice(1, 2, &[0.9, 0.0]), mask).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = Matrix::from_row_slice(2, 2, &[0.1, 1.0 / 3.0, -2.5e-17, 4.0]);
        let p = dir.path().join("m.csv");
        write_matrix(&p, &m).unwrap();
        assert_eq!(read_matrix(&p).unwrap(), m);
    }

    #[test]
    fn zscore_columns() {
        let x = Matrix::from_row_slice(3, 2, &[1.0, 5.0, 2.0, 5.0, 3.0, 5.0]);
        let z = zscore(&x);
        assert_relative_eq!(z.column(0).sum(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(z.column(0).norm_squared() / 3.0, 1.0, epsilon = 1e-12);
        assert!(z.column(1).iter().all(|&v| v == 0.0));
    }
}
