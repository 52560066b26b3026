//! The command-line tool end to end, driven in-process through `cli::run`.
//!
//! Writes its files to a fresh directory under the system temp dir.

use ldl_hidden::cli;
use ldl_hidden::data::write_matrix;
use ldl_hidden::synthetic::{generate, SyntheticSpec};

pub fn run_example() -> ldl_hidden::Result<()> {
    let dir = std::env::temp_dir().join(format!("ldl-hidden-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();

    let ds = generate(&SyntheticSpec { n: 80, ..Default::default() })?.dataset;
    write_matrix(p("features.csv"), &ds.features)?;
    write_matrix(p("labels.csv"), &ds.labels)?;

    let steps: [Vec<String>; 3] = [
        vec!["hide".into(), p("labels.csv"), "--missing-rate".into(), "0.5".into(), "--seed".into(), "1".into(),
             "--observed".into(), p("observed.csv"), "--mask".into(), p("mask.csv")],
        vec!["recover".into(), "--observed".into(), p("observed.csv"), "--mask".into(), p("mask.csv"),
             "--features".into(), p("features.csv"), "--out".into(), p("recovered.csv"), "--trace".into(), p("trace.csv")],
        vec!["evaluate".into(), p("recovered.csv"), p("labels.csv"), "--out".into(), p("report.json")],
    ];
    for args in steps {
        let code = cli::run(std::iter::once("ldl-hidden".to_string()).chain(args.iter().cloned()));
        println!("ldl-hidden {} -> exit {code}", args[0]);
    }
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p("report.json"))?)?;
    println!("mean Canberra of the recovered labels: {:.4}", report["canberra"]["mean"].as_f64().unwrap_or(f64::NAN));
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
