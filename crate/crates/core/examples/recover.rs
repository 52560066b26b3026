//! Hide half the labels of a synthetic dataset and recover them.

use ldl_hidden::data::{generate_mask, hide};
use ldl_hidden::graph::build_graph;
use ldl_hidden::metrics::{evaluate, MetricKind};
use ldl_hidden::solver::{solve, SolverConfig};
use ldl_hidden::synthetic::{generate, SyntheticSpec};

pub fn run_example() -> ldl_hidden::Result<()> {
    let ds = generate(&SyntheticSpec::default())?.dataset;
    let mask = generate_mask(&ds.labels, 0.5, 1)?;
    let view = hide(&ds.labels, &mask)?;
    let graph = build_graph(&ds.features, ds.m(), 1.0)?;

    let result = solve(&view, &graph, &SolverConfig::default())?;
    println!(
        "{} iterations, converged: {}, residuals {:.2e} / {:.2e}",
        result.iterations_used, result.converged, result.final_residuals.0, result.final_residuals.1
    );
    for rec in result.trace().iter().step_by(20) {
        println!("  iter {:>3}: |D-A| {:.2e}  |D-B| {:.2e}  objective {:.4}", rec.iteration, rec.residual_da, rec.residual_db, rec.objective);
    }

    let before = evaluate(&view.observed, &ds.labels)?;
    let after = evaluate(&result.recovered, &ds.labels)?;
    for kind in MetricKind::ALL {
        println!("{kind:>12}: observation {:.4} -> recovered {:.4}", before.mean(kind), after.mean(kind));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
