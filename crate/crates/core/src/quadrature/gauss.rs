//! One-dimensional Gauss-Legendre and Gauss-Lobatto rules on `[0, 1]`.

use std::f64::consts::PI;

/// `n`-point Gauss-Legendre rule on `[0, 1]`, nodes ascending. Exact for
/// degree `2n - 1`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x descends with i; fill symmetric pairs on [0, 1]
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        nodes[i] = 0.5 * (1.0 - x);
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n`-point Gauss-Lobatto rule on `[0, 1]` (both endpoints included), nodes
/// ascending. Exact for degree `2n - 3`.
pub fn gauss_lobatto_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "Gauss-Lobatto needs at least two points");
    let order = n - 1;
    let nf = order as f64;
    // Newton iteration on (1 - x^2) P'_N starting from Chebyshev-Lobatto nodes.
    let mut x: Vec<f64> = (0..n).map(|i| (PI * i as f64 / nf).cos()).collect();
    let mut p = vec![vec![0.0; n]; n];
    for _ in 0..100 {
        let mut change: f64 = 0.0;
        for (i, xi) in x.iter_mut().enumerate() {
            p[i][0] = 1.0;
            p[i][1] = *xi;
            for k in 2..n {
                let kf = k as f64;
                p[i][k] = ((2.0 * kf - 1.0) * *xi * p[i][k - 1] - (kf - 1.0) * p[i][k - 2]) / kf;
            }
            let step = (*xi * p[i][order] - p[i][order - 1]) / (n as f64 * p[i][order]);
            *xi -= step;
            change = change.max(step.abs());
        }
        if change <= 1e-16 {
            break;
        }
    }
    for (i, xi) in x.iter().enumerate() {
        p[i][0] = 1.0;
        if n > 1 {
            p[i][1] = *xi;
        }
        for k in 2..n {
            let kf = k as f64;
            p[i][k] = ((2.0 * kf - 1.0) * xi * p[i][k - 1] - (kf - 1.0) * p[i][k - 2]) / kf;
        }
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // x is descending; store ascending on [0, 1]
        let w = 2.0 / (nf * (nf + 1.0) * p[i][order] * p[i][order]);
        nodes[n - 1 - i] = 0.5 * (1.0 + x[i]);
        weights[n - 1 - i] = 0.5 * w;
    }
    // Symmetrize and pin endpoints exactly.
    nodes[0] = 0.0;
    nodes[n - 1] = 1.0;
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let t = 0.5 * (nodes[i] + 1.0 - nodes[j]);
        nodes[i] = t;
        nodes[j] = 1.0 - t;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    (nodes, weights)
}
