//! Full method against the variants without the proportional constraint and
//! without the trace norm, on shared masks.

use ldl_hidden::experiments::{run_ablation, AlphaSetting, ExperimentConfig};

pub fn run_example() -> ldl_hidden::Result<()> {
    let config = ExperimentConfig {
        missing_rates: vec![0.5],
        repeats: 3,
        alpha: AlphaSetting::Value(0.25),
        keep_traces: false,
        ..Default::default()
    };
    let report = run_ablation(&config)?;
    print!("{}", report.table_csv());
    for c in &report.comparisons {
        if c.metric.name() == "canberra" {
            println!("full vs {:?}: p = {:.3e}", c.baseline, c.test.p_value);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
