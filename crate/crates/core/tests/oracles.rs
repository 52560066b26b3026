//! Library routines against independent re-implementations.

mod common;

use approx::assert_relative_eq;
use ldl_hidden::data::Matrix;
use ldl_hidden::graph::build_graph;
use ldl_hidden::metrics::{row_metric, MetricKind};
use ldl_hidden::solver::steps::{gradient_d, singular_value_threshold, singular_values, update_a};
use ldl_hidden::solver::SolverState;
use ldl_hidden::stats::{paired_ttest_one_sided, student_t_cdf};
use rand::Rng;

#[test]
fn svt_matches_jacobi_shrinkage() {
    let mut rng = common::rng(10);
    for shape in [(5, 4), (4, 5), (6, 6)] {
        for _ in 0..100 {
            let a = Matrix::from_fn(shape.0, shape.1, |_, _| rng.random::<f64>() * 4.0 - 2.0);
            let tau = rng.random::<f64>() * 2.0;
            let diff = (singular_value_threshold(&a, tau).unwrap() - common::svt_oracle(&a, tau)).amax();
            assert!(diff <= 1e-9, "{shape:?} tau {tau}: {diff}");
        }
    }
}

#[test]
fn update_a_is_prox_of_shifted_input() {
    let mut rng = common::rng(11);
    for _ in 0..50 {
        let d = Matrix::from_fn(5, 4, |_, _| rng.random::<f64>());
        let l = Matrix::from_fn(5, 4, |_, _| rng.random::<f64>() - 0.5);
        let (alpha, rho) = (rng.random::<f64>(), 2.0);
        let ours = update_a(&d, &l, alpha, rho).unwrap();
        let oracle = common::svt_oracle(&(&d + &l / rho), alpha / rho);
        assert!((ours - oracle).amax() <= 1e-9);
    }
}

#[test]
fn singular_values_match_jacobi() {
    let mut rng = common::rng(12);
    let a = Matrix::from_fn(7, 3, |_, _| rng.random::<f64>());
    let mut oracle = common::jacobi_svd(&a).1;
    oracle.sort_by(|x, y| y.total_cmp(x));
    for (x, y) in singular_values(&a).unwrap().iter().zip(&oracle) {
        assert_relative_eq!(x, y, epsilon = 1e-12);
    }
}

#[test]
fn metrics_match_naive_formulas() {
    let mut rng = common::rng(13);
    for _ in 0..1000 {
        let m = rng.random_range(2..12);
        let a = common::random_simplex_row(&mut rng, m, 0.25);
        let b = common::random_simplex_row(&mut rng, m, 0.25);
        let expected = [
            common::naive_chebyshev(&a, &b),
            common::naive_clark(&a, &b),
            common::naive_canberra(&a, &b),
            common::naive_cosine(&a, &b),
            common::naive_intersection(&a, &b),
        ];
        for (kind, e) in MetricKind::ALL.into_iter().zip(expected) {
            let got = row_metric(kind, &a, &b).unwrap();
            assert!((got - e).abs() <= 1e-12, "{kind}: {got} vs {e}");
        }
    }
}

#[test]
fn t_cdf_matches_numeric_integration() {
    for dof in 2..=10u32 {
        for t in [-6.0, -2.5, -1.0, -0.3, 0.0, 0.7, 2.0] {
            let diff = (student_t_cdf(t, dof as f64) - common::t_cdf_oracle(t, dof)).abs();
            assert!(diff <= 1e-6, "dof {dof}, t {t}: {diff}");
        }
    }
}

#[test]
fn ttest_p_values_match_numeric_integration() {
    let mut rng = common::rng(14);
    for dof in 2..=10u32 {
        let n = dof as usize + 1;
        let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.1).collect();
        let r = paired_ttest_one_sided(&a, &b, 0.05).unwrap();
        assert_eq!(r.degrees_of_freedom, dof as usize);
        assert!((r.p_value - common::t_cdf_oracle(r.t_stat, dof)).abs() <= 1e-6);
    }
}

fn smooth_part(state: &SolverState, laplacian: &Matrix, rho: f64) -> f64 {
    let d = &state.d;
    let (da, db) = (d - &state.a, d - &state.b);
    0.5 * (d.transpose() * laplacian * d).trace()
        + state.lambda1.dot(&da)
        + state.lambda2.dot(&db)
        + 0.5 * rho * (da.norm_squared() + db.norm_squared())
}

#[test]
fn d_gradient_matches_central_differences() {
    let mut rng = common::rng(15);
    for _ in 0..20 {
        let (n, m) = (6, 4);
        let x = Matrix::from_fn(n, 2, |_, _| rng.random::<f64>());
        let g = build_graph(&x, 3, 0.7).unwrap();
        let mut r = || Matrix::from_fn(n, m, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        let state = SolverState {
            d: r(),
            a: r(),
            b: r(),
            lambda1: r(),
            lambda2: r(),
            iteration: 0,
            residual_history: vec![],
            objective_history: vec![],
        };
        let rho = 2.0;
        let grad = gradient_d(&state, &g, rho).unwrap();
        let h = 1e-5;
        let fd = Matrix::from_fn(n, m, |i, j| {
            let (mut up, mut dn) = (state.clone(), state.clone());
            up.d[(i, j)] += h;
            dn.d[(i, j)] -= h;
            (smooth_part(&up, &g.laplacian, rho) - smooth_part(&dn, &g.laplacian, rho)) / (2.0 * h)
        });
        let rel = (&grad - &fd).norm() / fd.norm();
        assert!(rel <= 1e-5, "{rel}");
    }
}
