//! End-to-end recovery behaviour on synthetic data.

use ldl_hidden::data::{generate_mask, hide, Mask};
use ldl_hidden::graph::build_graph;
use ldl_hidden::metrics::evaluate;
use ldl_hidden::solver::{recovery_bound_diagnostics, solve, SolverConfig};
use ldl_hidden::synthetic::{generate, SyntheticSpec};

#[test]
fn full_observation_is_pinned_on_small_dataset() {
    let ds = generate(&SyntheticSpec { n: 50, m: 4, ..Default::default() }).unwrap().dataset;
    let view = hide(&ds.labels, &Mask::all_observed(50, 4)).unwrap();
    let r = solve(&view, &build_graph(&ds.features, 4, 1.0).unwrap(), &SolverConfig::default()).unwrap();
    let per_row = evaluate(&r.recovered, &ds.labels).unwrap().canberra.per_row;
    let worst = per_row.iter().copied().fold(0.0, f64::max);
    assert!(worst <= 0.05, "worst row Canberra {worst}");
}

#[test]
fn rank_one_truth_with_one_feature_cluster() {
    let spec = SyntheticSpec { n: 50, m: 4, rank: 1, noise_label: 0.0, noise_feature: 0.0, ..Default::default() };
    let ds = generate(&spec).unwrap().dataset;
    let view = hide(&ds.labels, &generate_mask(&ds.labels, 0.5, 0).unwrap()).unwrap();
    let r = solve(&view, &build_graph(&ds.features, 4, 1.0).unwrap(), &SolverConfig::default()).unwrap();
    let per_row = evaluate(&r.recovered, &ds.labels).unwrap().chebyshev.per_row;
    assert!(per_row.iter().all(|&c| c <= 0.05), "{per_row:?}");
}

#[test]
fn recovery_beats_the_observation() {
    let ds = generate(&SyntheticSpec::default()).unwrap().dataset;
    let view = hide(&ds.labels, &generate_mask(&ds.labels, 0.5, 4).unwrap()).unwrap();
    let r = solve(&view, &build_graph(&ds.features, ds.m(), 1.0).unwrap(), &SolverConfig::default()).unwrap();
    let before = evaluate(&view.observed, &ds.labels).unwrap().canberra.mean;
    let after = evaluate(&r.recovered, &ds.labels).unwrap().canberra.mean;
    assert!(after < 0.5 * before, "{after} vs {before}");
}

#[test]
fn bound_report_matches_its_definition() {
    let ds = generate(&SyntheticSpec { n: 40, ..Default::default() }).unwrap().dataset;
    let view = hide(&ds.labels, &generate_mask(&ds.labels, 0.3, 2).unwrap()).unwrap();
    let r = solve(&view, &build_graph(&ds.features, ds.m(), 1.0).unwrap(), &SolverConfig::default()).unwrap();
    let report = recovery_bound_diagnostics(&r, &view, &ds.labels).unwrap();
    assert_eq!(report.rows.len(), 40);
    for b in &report.rows {
        let obs_truth: f64 = (0..ds.m()).filter(|&j| view.mask.is_observed(b.row, j)).map(|j| ds.labels[(b.row, j)]).sum();
        let obs_rec: f64 = (0..ds.m()).filter(|&j| view.mask.is_observed(b.row, j)).map(|j| r.recovered[(b.row, j)]).sum();
        assert!((b.k_truth - 1.0 / obs_truth).abs() < 1e-12);
        assert!((b.sigma - (1.0 - obs_rec)).abs() < 1e-12);
        assert!((b.epsilon - b.sigma.powi(2) / obs_truth.powi(2)).abs() < 1e-12);
        assert_eq!(b.violated, report.violating_rows.contains(&b.row));
    }
}
