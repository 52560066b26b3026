//! Compare recovered scaling coefficients with the ground-truth ones and
//! list the rows that break the per-row bound.

use ldl_hidden::data::{generate_mask, hide};
use ldl_hidden::graph::build_graph;
use ldl_hidden::solver::{recovery_bound_diagnostics, solve, SolverConfig};
use ldl_hidden::synthetic::{generate, SyntheticSpec};

pub fn run_example() -> ldl_hidden::Result<()> {
    let ds = generate(&SyntheticSpec { n: 60, ..Default::default() })?.dataset;
    let view = hide(&ds.labels, &generate_mask(&ds.labels, 0.2, 5)?)?;
    let result = solve(&view, &build_graph(&ds.features, ds.m(), 1.0)?, &SolverConfig::default())?;
    let report = recovery_bound_diagnostics(&result, &view, &ds.labels)?;

    println!("row   k_truth  k_recovered  sq_error   epsilon");
    for b in report.rows.iter().take(8) {
        println!(
            "{:>3}  {:8.4}  {:11.4}  {:8.2e}  {:8.2e}{}",
            b.row,
            b.k_truth,
            b.k_recovered,
            b.squared_error,
            b.epsilon,
            if b.violated { "  *" } else { "" }
        );
    }
    println!("{:.1}% of rows within the bound; violating rows: {:?}", 100.0 * report.fraction_within(), report.violating_rows);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
