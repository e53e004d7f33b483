//! Jacobi-preconditioned conjugate gradients.

use std::time::{Duration, Instant};

use super::sparse::CsrMatrix;
use crate::error::SolveError;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// `||b - A x|| / ||b||` of the returned solution.
    pub residual: f64,
    pub wall_time: Duration,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `b - A x` row by row in compensated arithmetic, so that the residual is
/// accurate even when it is far below `eps ||A|| ||x||`.
fn true_residual(a: &CsrMatrix, b: &[f64], x: &[f64], r: &mut [f64]) -> f64 {
    for (i, ri) in r.iter_mut().enumerate() {
        let (cols, vals) = a.row(i);
        let (mut s, mut c) = (b[i], 0.0);
        for (&j, &v) in cols.iter().zip(vals) {
            let p = -v * x[j];
            let pe = (-v).mul_add(x[j], -p);
            let t = s + p;
            let z = t - s;
            c += (s - (t - z)) + (p - z) + pe;
            s = t;
        }
        *ri = s + c;
    }
    norm(r)
}

/// Solves `A x = b` for symmetric positive definite `A` to relative residual
/// `tol`, in at most `max_iter` iterations (`None`: `10 n`).
pub fn conjugate_gradient(
    a: &CsrMatrix,
    b: &[f64],
    tol: f64,
    max_iter: Option<usize>,
) -> Result<(Vec<f64>, SolveReport), SolveError> {
    let start = Instant::now();
    let n = b.len();
    if a.rows() != n || a.cols() != n {
        return Err(SolveError::Dimension(format!(
            "matrix is {}x{}, right-hand side has {n} entries",
            a.rows(),
            a.cols()
        )));
    }
    let max_iter = max_iter.unwrap_or(10 * n.max(1));
    let mut x = vec![0.0; n];
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok((
            x,
            SolveReport {
                iterations: 0,
                residual: 0.0,
                wall_time: start.elapsed(),
            },
        ));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();

    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];
    let mut iterations = 0;
    let mut rel = 1.0;

    // restart from the true residual when the recursion drifts
    for _restart in 0..5 {
        for i in 0..n {
            z[i] = inv_diag[i] * r[i];
        }
        p.copy_from_slice(&z);
        let mut rz = dot(&r, &z);
        while iterations < max_iter {
            if norm(&r) <= tol * bnorm {
                break;
            }
            a.mul_vec_into(&p, &mut q);
            let pq = dot(&p, &q);
            if pq.is_nan() || pq <= 0.0 {
                break;
            }
            let alpha = rz / pq;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            iterations += 1;
            for i in 0..n {
                z[i] = inv_diag[i] * r[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        rel = true_residual(a, b, &x, &mut r) / bnorm;
        if rel <= tol || iterations >= max_iter {
            break;
        }
    }

    if rel <= tol {
        Ok((
            x,
            SolveReport {
                iterations,
                residual: rel,
                wall_time: start.elapsed(),
            },
        ))
    } else {
        Err(SolveError::MaxIterExceeded {
            iterations,
            residual: rel,
        })
    }
}
