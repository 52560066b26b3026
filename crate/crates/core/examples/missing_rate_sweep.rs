//! Recovery quality as the missing rate grows, against the identity baseline.

use ldl_hidden::experiments::{run_missing_rate_sweep, AlphaSetting, ExperimentConfig};

pub fn run_example() -> ldl_hidden::Result<()> {
    let config = ExperimentConfig {
        repeats: 2,
        alpha: AlphaSetting::Value(0.25),
        keep_traces: false,
        ..Default::default()
    };
    print!("{}", run_missing_rate_sweep(&config)?.curves_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
