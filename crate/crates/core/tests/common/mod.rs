//! Independent re-implementations used as test oracles.
#![allow(dead_code)]

use ldl_hidden::data::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One-sided Jacobi SVD: returns `(U, s, V)` with `a = U diag(s) Vᵀ`.
/// `a` must have at least as many rows as columns.
pub fn jacobi_svd(a: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let (m, n) = a.shape();
    assert!(m >= n);
    let mut u = a.clone();
    let mut v = Matrix::identity(n, n);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    alpha += u[(i, p)] * u[(i, p)];
                    beta += u[(i, q)] * u[(i, q)];
                    gamma += u[(i, p)] * u[(i, q)];
                }
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * x - s * y;
                    u[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut s = vec![0.0; n];
    for j in 0..n {
        let norm = (0..m).map(|i| u[(i, j)] * u[(i, j)]).sum::<f64>().sqrt();
        s[j] = norm;
        if norm > 0.0 {
            for i in 0..m {
                u[(i, j)] /= norm;
            }
        }
    }
    (u, s, v)
}

/// `U max(s - τ, 0) Vᵀ` through the Jacobi decomposition.
pub fn svt_oracle(a: &Matrix, tau: f64) -> Matrix {
    let transposed = a.nrows() < a.ncols();
    let work = if transposed { a.transpose() } else { a.clone() };
    let (u, s, v) = jacobi_svd(&work);
    let mut out = Matrix::zeros(work.nrows(), work.ncols());
    for (k, &sk) in s.iter().enumerate() {
        let shrunk = (sk - tau).max(0.0);
        if shrunk == 0.0 {
            continue;
        }
        for i in 0..work.nrows() {
            for j in 0..work.ncols() {
                out[(i, j)] += shrunk * u[(i, k)] * v[(j, k)];
            }
        }
    }
    if transposed {
        out.transpose()
    } else {
        out
    }
}

pub fn naive_chebyshev(a: &[f64], b: &[f64]) -> f64 {
    let mut best = 0.0;
    for i in 0..a.len() {
        let d = if a[i] > b[i] { a[i] - b[i] } else { b[i] - a[i] };
        if d > best {
            best = d;
        }
    }
    best
}

pub fn naive_clark(a: &[f64], b: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..a.len() {
        if a[i] + b[i] > 0.0 {
            total += ((a[i] - b[i]) / (a[i] + b[i])).powi(2);
        }
    }
    total.sqrt()
}

pub fn naive_canberra(a: &[f64], b: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..a.len() {
        if a[i] + b[i] > 0.0 {
            total += (a[i] - b[i]).abs() / (a[i] + b[i]);
        }
    }
    total
}

pub fn naive_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = (0..a.len()).map(|i| a[i] * b[i]).sum();
    let na: f64 = (0..a.len()).map(|i| a[i] * a[i]).sum();
    let nb: f64 = (0..a.len()).map(|i| b[i] * b[i]).sum();
    dot / (na * nb).sqrt()
}

pub fn naive_intersection(a: &[f64], b: &[f64]) -> f64 {
    (0..a.len()).map(|i| if a[i] < b[i] { a[i] } else { b[i] }).sum()
}

/// `Γ(k / 2)` for a positive integer `k`.
fn gamma_half(k: u32) -> f64 {
    if k == 1 {
        std::f64::consts::PI.sqrt()
    } else if k == 2 {
        1.0
    } else {
        (k as f64 / 2.0 - 1.0) * gamma_half(k - 2)
    }
}

/// Student t density with integer degrees of freedom.
pub fn t_density(x: f64, dof: u32) -> f64 {
    let v = dof as f64;
    gamma_half(dof + 1) / ((v * std::f64::consts::PI).sqrt() * gamma_half(dof)) * (1.0 + x * x / v).powf(-(v + 1.0) / 2.0)
}

/// `P(T <= t)` by composite Simpson integration of the density between 0 and `t`.
pub fn t_cdf_oracle(t: f64, dof: u32) -> f64 {
    let intervals = 200_000;
    let h = t / intervals as f64;
    let mut acc = t_density(0.0, dof) + t_density(t, dof);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * t_density(i as f64 * h, dof);
    }
    0.5 + acc * h / 3.0
}

pub fn random_simplex_row(rng: &mut ChaCha8Rng, m: usize, zero_prob: f64) -> Vec<f64> {
    loop {
        let row: Vec<f64> = (0..m)
            .map(|_| if rng.random::<f64>() < zero_prob { 0.0 } else { rng.random::<f64>() })
            .collect();
        let s: f64 = row.iter().sum();
        if s > 0.0 {
            return row.iter().map(|v| v / s).collect();
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
