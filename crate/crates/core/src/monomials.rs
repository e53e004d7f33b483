//! Scaled monomials `c * ((x - x_E) / h_E)^ex * ((y - y_E) / h_E)^ey`.
//!
//! The element frame is passed explicitly so the same monomial can be
//! evaluated on any element. Basis order is graded: by total degree, and
//! within a degree by descending x-exponent.

use std::ops::Mul;

use crate::geometry::{Facet, Point2};

/// Center and length scale of the scaled monomials of one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub center: Point2,
    pub scale: f64,
}

impl Frame {
    pub fn new(center: Point2, scale: f64) -> Self {
        Self { center, scale }
    }

    /// The facet's centroid and diameter.
    pub fn of_facet(f: &Facet) -> Self {
        Self::new(f.centroid(), f.diameter())
    }

    pub fn to_local(&self, p: Point2) -> (f64, f64) {
        (
            (p.x - self.center.x) / self.scale,
            (p.y - self.center.y) / self.scale,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMonomial {
    pub ex: usize,
    pub ey: usize,
    pub coeff: f64,
}

impl ScaledMonomial {
    pub const fn new(ex: usize, ey: usize, coeff: f64) -> Self {
        Self { ex, ey, coeff }
    }

    pub const fn unit(ex: usize, ey: usize) -> Self {
        Self::new(ex, ey, 1.0)
    }

    pub const fn zero() -> Self {
        Self::new(0, 0, 0.0)
    }

    pub fn degree(&self) -> usize {
        self.ex + self.ey
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0.0
    }

    pub fn product(&self, other: &Self) -> Self {
        Self::new(
            self.ex + other.ex,
            self.ey + other.ey,
            self.coeff * other.coeff,
        )
    }

    /// Derivative with respect to the scaled variable; the physical
    /// derivative carries an extra `1 / h_E`.
    pub fn derivative(&self, axis: Axis) -> Self {
        let e = match axis {
            Axis::X => self.ex,
            Axis::Y => self.ey,
        };
        if e == 0 {
            return Self::zero();
        }
        match axis {
            Axis::X => Self::new(self.ex - 1, self.ey, self.coeff * e as f64),
            Axis::Y => Self::new(self.ex, self.ey - 1, self.coeff * e as f64),
        }
    }

    /// Physical Laplacian as at most two scaled monomials of degree
    /// `degree - 2`, each coefficient already divided by `h^2`.
    pub fn laplacian(&self, h: f64) -> Vec<ScaledMonomial> {
        let s = self.coeff / (h * h);
        let mut out = Vec::with_capacity(2);
        if self.ex >= 2 {
            out.push(Self::new(
                self.ex - 2,
                self.ey,
                s * (self.ex * (self.ex - 1)) as f64,
            ));
        }
        if self.ey >= 2 {
            out.push(Self::new(
                self.ex,
                self.ey - 2,
                s * (self.ey * (self.ey - 1)) as f64,
            ));
        }
        out
    }

    pub fn eval_local(&self, xs: f64, ys: f64) -> f64 {
        self.coeff * xs.powi(self.ex as i32) * ys.powi(self.ey as i32)
    }

    pub fn evaluate(&self, p: Point2, frame: &Frame) -> f64 {
        let (xs, ys) = frame.to_local(p);
        self.eval_local(xs, ys)
    }

    /// Physical gradient at `p`.
    pub fn gradient(&self, p: Point2, frame: &Frame) -> Point2 {
        let (xs, ys) = frame.to_local(p);
        let inv_h = 1.0 / frame.scale;
        Point2::new(
            self.derivative(Axis::X).eval_local(xs, ys) * inv_h,
            self.derivative(Axis::Y).eval_local(xs, ys) * inv_h,
        )
    }
}

impl Mul for ScaledMonomial {
    type Output = ScaledMonomial;
    fn mul(self, rhs: Self) -> Self {
        self.product(&rhs)
    }
}

/// Dimension of the polynomials of degree at most `k`; zero for negative `k`.
pub fn dim_p(k: isize) -> usize {
    if k < 0 {
        0
    } else {
        let k = k as usize;
        (k + 1) * (k + 2) / 2
    }
}

/// Position of `x^ex y^ey` in the graded basis.
pub fn basis_index(ex: usize, ey: usize) -> usize {
    let d = ex + ey;
    d * (d + 1) / 2 + ey
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    degree: usize,
    entries: Vec<ScaledMonomial>,
}

impl MonomialBasis {
    pub fn new(degree: usize) -> Self {
        let mut entries = Vec::with_capacity(dim_p(degree as isize));
        for d in 0..=degree {
            for ey in 0..=d {
                entries.push(ScaledMonomial::unit(d - ey, ey));
            }
        }
        Self { degree, entries }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ScaledMonomial] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> ScaledMonomial {
        self.entries[i]
    }

    /// Values of every basis monomial at `p`.
    pub fn eval_all(&self, p: Point2, frame: &Frame) -> Vec<f64> {
        let (xs, ys) = frame.to_local(p);
        let mut xp = vec![1.0; self.degree + 1];
        let mut yp = vec![1.0; self.degree + 1];
        for i in 1..=self.degree {
            xp[i] = xp[i - 1] * xs;
            yp[i] = yp[i - 1] * ys;
        }
        self.entries.iter().map(|m| xp[m.ex] * yp[m.ey]).collect()
    }

    /// Physical gradients of every basis monomial at `p`.
    pub fn grad_all(&self, p: Point2, frame: &Frame) -> Vec<Point2> {
        self.entries.iter().map(|m| m.gradient(p, frame)).collect()
    }
}
