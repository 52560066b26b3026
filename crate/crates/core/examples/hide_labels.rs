//! Simulate an annotator who leaves out some labels.
//!
//! ```text
//! cargo run --example hide_labels
//! ```

use ldl_hidden::data::{generate_mask, hide, Matrix};

pub fn run_example() -> ldl_hidden::Result<()> {
    // Three instances of a scene-like dataset over five labels.
    let truth = Matrix::from_row_slice(
        3,
        5,
        &[
            0.40, 0.30, 0.15, 0.10, 0.05, //
            0.05, 0.05, 0.20, 0.30, 0.40, //
            0.25, 0.25, 0.20, 0.20, 0.10,
        ],
    );
    let mask = generate_mask(&truth, 0.4, 7)?;
    let view = hide(&truth, &mask)?;

    println!("hidden {} of {} entries, mask {}", mask.hidden_count(), truth.len(), &mask.fingerprint()[..12]);
    for i in 0..truth.nrows() {
        let row: Vec<String> = (0..truth.ncols())
            .map(|j| {
                if mask.is_observed(i, j) {
                    format!("{:.3}", view.observed[(i, j)])
                } else {
                    "  -  ".to_string()
                }
            })
            .collect();
        println!("row {i}: {}", row.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
