//! Predictive setting: recover the training labels, fit the softmax model on
//! them and score predictions on held-out rows.

use ldl_hidden::data::{generate_mask, hide, train_test_split};
use ldl_hidden::graph::build_graph;
use ldl_hidden::metrics::{evaluate, MetricKind};
use ldl_hidden::predictor::fit;
use ldl_hidden::solver::{solve, SolverConfig};
use ldl_hidden::synthetic::{generate, SyntheticSpec};

pub fn run_example() -> ldl_hidden::Result<()> {
    let ds = generate(&SyntheticSpec { seed: 3, ..Default::default() })?.dataset;
    let (train, test) = train_test_split(&ds, 0.8, 3)?;
    let view = hide(&train.labels, &generate_mask(&train.labels, 0.6, 3)?)?;
    let recovered = solve(&view, &build_graph(&train.features, train.m(), 1.0)?, &SolverConfig::default())?.recovered;

    for (name, targets) in [("observation", &view.observed), ("recovered", &recovered), ("ground truth", &train.labels)] {
        let model = fit(&train.features, targets, 500, 1e-6, 0)?;
        let report = evaluate(&model.predict(&test.features)?, &test.labels)?;
        println!(
            "trained on {name:<12}: test Canberra {:.4}, Intersection {:.4}",
            report.mean(MetricKind::Canberra),
            report.mean(MetricKind::Intersection)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
