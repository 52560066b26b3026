//! Sensitivity to the trace-norm weight over a power-of-two grid.

use ldl_hidden::experiments::{run_alpha_sweep, AlphaSetting, ExperimentConfig};

pub fn run_example() -> ldl_hidden::Result<()> {
    let config = ExperimentConfig {
        missing_rates: vec![0.5],
        repeats: 2,
        alpha: AlphaSetting::Grid((-6..=6).step_by(2).map(|e| 2f64.powi(e)).collect()),
        keep_traces: false,
        ..Default::default()
    };
    print!("{}", run_alpha_sweep(&config)?.curves_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
