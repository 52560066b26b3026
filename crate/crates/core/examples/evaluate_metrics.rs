//! The five label-distribution measures on a couple of rows.

use ldl_hidden::data::Matrix;
use ldl_hidden::metrics::{evaluate, row_metric, MetricKind};

pub fn run_example() -> ldl_hidden::Result<()> {
    let truth = [0.6, 0.4, 0.0];
    let guess = [0.5, 0.4, 0.1];
    for kind in MetricKind::ALL {
        let arrow = if kind.lower_is_better() { "lower" } else { "higher" };
        println!("{kind:>12} = {:.5} ({arrow} is better)", row_metric(kind, &truth, &guess)?);
    }

    let t = Matrix::from_row_slice(2, 3, &[0.6, 0.4, 0.0, 0.1, 0.1, 0.8]);
    let r = Matrix::from_row_slice(2, 3, &[0.5, 0.4, 0.1, 0.2, 0.1, 0.7]);
    println!("{}", serde_json::to_string_pretty(&evaluate(&r, &t)?)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
