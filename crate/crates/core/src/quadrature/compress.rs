//! Quadrature compression by non-negative least squares.
//!
//! Given a rule with `N` points exact to degree `d`, find non-negative weights
//! on a subset of the points reproducing every moment of degree `<= d`. The
//! Lawson-Hanson active-set method returns a basic solution, so at most
//! `dim P_d` weights stay positive.

use nalgebra::{DMatrix, DVector};

/// Result of a non-negative least squares solve.
#[derive(Debug, Clone)]
pub struct NnlsSolution {
    pub x: DVector<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Lawson-Hanson active set for `min ||A x - b||` subject to `x >= 0`.
///
/// The entering column is the one with the largest dual entry, ties broken
/// by the lowest index.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> NnlsSolution {
    let (m, n) = a.shape();
    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let anorm = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tol = 10.0 * f64::EPSILON * anorm * (m.max(n) as f64) * b.norm().max(1.0);
    let max_iter = 3 * n.max(1) + 10;
    let mut iterations = 0;

    while iterations < max_iter {
        let r = b - a * &x;
        let w = a.transpose() * r;
        let mut enter: Option<usize> = None;
        for j in 0..n {
            if !passive[j] && w[j] > tol && enter.is_none_or(|e| w[j] > w[e]) {
                enter = Some(j);
            }
        }
        let Some(j) = enter else { break };
        passive[j] = true;

        loop {
            iterations += 1;
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let s = least_squares(a, b, &idx);
            if s.iter().all(|&v| v > 0.0) {
                for (k, &i) in idx.iter().enumerate() {
                    x[i] = s[k];
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (k, &i) in idx.iter().enumerate() {
                if s[k] <= 0.0 {
                    let denom = x[i] - s[k];
                    let t = if denom > 0.0 { x[i] / denom } else { 0.0 };
                    alpha = alpha.min(t);
                }
            }
            for (k, &i) in idx.iter().enumerate() {
                x[i] += alpha * (s[k] - x[i]);
                if x[i] <= 0.0 || (s[k] <= 0.0 && x[i] <= f64::EPSILON * anorm) {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            if iterations >= max_iter || !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    let residual = (b - a * &x).norm();
    NnlsSolution {
        x,
        residual,
        iterations,
    }
}

fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>, cols: &[usize]) -> Vec<f64> {
    let sub = a.select_columns(cols);
    let svd = sub.svd(true, true);
    match svd.solve(
        b,
        f64::EPSILON * (cols.len() as f64) * svd.singular_values.max(),
    ) {
        Ok(s) => s.iter().copied().collect(),
        Err(_) => vec![0.0; cols.len()],
    }
}

/// Points kept by a compression and their new weights.
#[derive(Debug, Clone)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub weights: Vec<f64>,
    /// `||V w_new - V w_old|| / ||V w_old||`.
    pub relative_residual: f64,
}

/// Compresses weights given the moment matrix `values[(alpha, i)] = p_alpha(x_i)`.
pub fn compress_weights(values: &DMatrix<f64>, weights: &[f64]) -> Selection {
    let w = DVector::from_column_slice(weights);
    let target = values * &w;
    // orthogonalize the moment rows first: same span, far better conditioning
    let q = values.transpose().qr().q().transpose();
    let sol = nnls(&q, &(&q * &w));
    let indices: Vec<usize> = (0..weights.len()).filter(|&i| sol.x[i] > 0.0).collect();
    let new_w: Vec<f64> = indices.iter().map(|&i| sol.x[i]).collect();
    let residual = (values * &sol.x - &target).norm();
    let relative_residual = residual / target.norm().max(f64::MIN_POSITIVE);
    Selection {
        indices,
        weights: new_w,
        relative_residual,
    }
}
