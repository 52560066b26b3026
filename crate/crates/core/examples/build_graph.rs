//! KNN similarity graph, its Laplacian and the smoothness energy.

use ldl_hidden::data::Matrix;
use ldl_hidden::graph::{build_graph, knn_lists, pairwise_energy, smoothness_energy};

pub fn run_example() -> ldl_hidden::Result<()> {
    let features = Matrix::from_row_slice(5, 2, &[0.0, 0.0, 0.1, 0.0, 0.0, 0.2, 3.0, 3.0, 3.1, 2.9]);
    let g = build_graph(&features, 2, 1.0)?;
    println!("neighbours: {:?}", knn_lists(&features, 2));
    println!("largest Laplacian eigenvalue ~ {:.4}", g.largest_eigenvalue(50));

    // Smooth labels follow the two clusters; rough ones do not.
    let smooth = Matrix::from_row_slice(5, 2, &[0.9, 0.1, 0.9, 0.1, 0.8, 0.2, 0.1, 0.9, 0.2, 0.8]);
    let rough = Matrix::from_row_slice(5, 2, &[0.9, 0.1, 0.1, 0.9, 0.8, 0.2, 0.9, 0.1, 0.2, 0.8]);
    for (name, d) in [("smooth", &smooth), ("rough", &rough)] {
        println!(
            "{name}: tr(DᵀGD) = {:.4}, pairwise sum = {:.4}",
            smoothness_energy(&g, d)?,
            pairwise_energy(&g, d)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
