//! Closed-form monomial integrals over polygons via Green's theorem.
//!
//! `∫_E X^a Y^b dA = ∮ X^(a+1) Y^b / (a+1) dY`, with every edge integral
//! expanded binomially. No quadrature is involved, so this is an independent
//! check of every area rule.

use crate::geometry::{Facet, Point2};
use crate::monomials::{Frame, MonomialBasis};

fn binomial(n: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// `∫_0^1 (x0 + t dx)^p (y0 + t dy)^q dt`.
fn segment_moment(x0: f64, dx: f64, y0: f64, dy: f64, p: usize, q: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..=p {
        let ci = binomial(p, i) * x0.powi((p - i) as i32) * dx.powi(i as i32);
        if ci == 0.0 {
            continue;
        }
        for j in 0..=q {
            let cj = binomial(q, j) * y0.powi((q - j) as i32) * dy.powi(j as i32);
            s += ci * cj / (i + j + 1) as f64;
        }
    }
    s
}

/// `∫_E ((x - x_c)/h)^a ((y - y_c)/h)^b dA` for the frame `(x_c, y_c, h)`.
pub fn scaled_monomial_integral(facet: &Facet, frame: &Frame, a: usize, b: usize) -> f64 {
    let mut total = 0.0;
    for l in facet.loops() {
        let pts: Vec<(f64, f64)> = l.points().iter().map(|&p| frame.to_local(p)).collect();
        let n = pts.len();
        for i in 0..n {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[(i + 1) % n];
            let dy = y1 - y0;
            if dy == 0.0 {
                continue;
            }
            total += dy * segment_moment(x0, x1 - x0, y0, dy, a + 1, b) / (a + 1) as f64;
        }
    }
    total * frame.scale * frame.scale
}

/// Raw moment `∫_E x^a y^b dA`.
pub fn monomial_integral(facet: &Facet, a: usize, b: usize) -> f64 {
    scaled_monomial_integral(facet, &Frame::new(Point2::new(0.0, 0.0), 1.0), a, b)
}

/// Integrals of every monomial of the basis of degree `degree`.
pub fn basis_integrals(facet: &Facet, frame: &Frame, degree: usize) -> Vec<f64> {
    MonomialBasis::new(degree)
        .entries()
        .iter()
        .map(|m| scaled_monomial_integral(facet, frame, m.ex, m.ey))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_moments() {
        let f = Facet::polygon(&[
            Point2::new(0., 0.),
            Point2::new(1., 0.),
            Point2::new(1., 1.),
            Point2::new(0., 1.),
        ])
        .unwrap();
        assert!((monomial_integral(&f, 0, 0) - 1.0).abs() < 1e-15);
        assert!((monomial_integral(&f, 2, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((monomial_integral(&f, 2, 3) - 1.0 / 12.0).abs() < 1e-15);
        let frame = Frame::of_facet(&f);
        // ∫ ((x - 1/2)/√2)^2 = 1/24
        assert!((scaled_monomial_integral(&f, &frame, 2, 0) - 1.0 / 24.0).abs() < 1e-15);
        assert!(scaled_monomial_integral(&f, &frame, 1, 0).abs() < 1e-16);
    }

    #[test]
    fn triangle_moment() {
        let f = Facet::polygon(&[
            Point2::new(0., 0.),
            Point2::new(1., 0.),
            Point2::new(0., 1.),
        ])
        .unwrap();
        // a! b! / (a + b + 2)!
        assert!((monomial_integral(&f, 1, 1) - 1.0 / 24.0).abs() < 1e-15);
        assert!((monomial_integral(&f, 3, 0) - 6.0 / 120.0).abs() < 1e-15);
    }
}
