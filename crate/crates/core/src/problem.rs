//! Model problems `-Δu = f` with known solutions.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use crate::error::{Error, MeshError};
use crate::geometry::Point2;

/// Polynomial `Σ c x^a y^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(u32, u32, f64)>,
}

impl Polynomial {
    /// Every monomial of degree `<= k` with coefficient 1.
    pub fn full(k: usize) -> Self {
        let mut terms = Vec::new();
        for d in 0..=k as u32 {
            for j in 0..=d {
                terms.push((d - j, j, 1.0));
            }
        }
        Self { terms }
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|&(a, b, _)| (a + b) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn value(&self, p: Point2) -> f64 {
        self.terms
            .iter()
            .map(|&(a, b, c)| c * p.x.powi(a as i32) * p.y.powi(b as i32))
            .sum()
    }

    pub fn gradient(&self, p: Point2) -> Point2 {
        let mut g = Point2::new(0.0, 0.0);
        for &(a, b, c) in &self.terms {
            if a > 0 {
                g.x += c * a as f64 * p.x.powi(a as i32 - 1) * p.y.powi(b as i32);
            }
            if b > 0 {
                g.y += c * b as f64 * p.x.powi(a as i32) * p.y.powi(b as i32 - 1);
            }
        }
        g
    }

    pub fn laplacian(&self, p: Point2) -> f64 {
        let mut s = 0.0;
        for &(a, b, c) in &self.terms {
            if a > 1 {
                s += c * (a * (a - 1)) as f64 * p.x.powi(a as i32 - 2) * p.y.powi(b as i32);
            }
            if b > 1 {
                s += c * (b * (b - 1)) as f64 * p.x.powi(a as i32) * p.y.powi(b as i32 - 2);
            }
        }
        s
    }

    /// Parses lines `c a b` (coefficient and exponents); `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, MeshError> {
        let mut terms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("");
            let t: Vec<&str> = content.split_whitespace().collect();
            if t.is_empty() {
                continue;
            }
            let err = |m: &str| MeshError::Parse {
                line: i + 1,
                message: m.to_string(),
            };
            if t.len() != 3 {
                return Err(err("expected 'coefficient xExponent yExponent'"));
            }
            let c: f64 = t[0].parse().map_err(|_| err("invalid coefficient"))?;
            let a: u32 = t[1].parse().map_err(|_| err("invalid exponent"))?;
            let b: u32 = t[2].parse().map_err(|_| err("invalid exponent"))?;
            if !c.is_finite() {
                return Err(err("non-finite coefficient"));
            }
            terms.push((a, b, c));
        }
        if terms.is_empty() {
            return Err(MeshError::Parse {
                line: text.lines().count().max(1),
                message: "no polynomial terms".into(),
            });
        }
        Ok(Self { terms })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    /// `u = sin(πx) sin(πy)`, `f = 2π² u`.
    SinSin,
    /// Polynomial solution, `f = -Δu`.
    Polynomial(Polynomial),
}

impl Problem {
    /// Resolves `sinsin`, `polyK` (full polynomial of the solver degree) or
    /// `file:<path>` (polynomial terms, see [`Polynomial::parse`]).
    pub fn from_name(name: &str, degree: usize) -> Result<Self, Error> {
        if name == "sinsin" {
            return Ok(Problem::SinSin);
        }
        if name == "polyK" || name == "polyk" {
            return Ok(Problem::Polynomial(Polynomial::full(degree)));
        }
        if let Some(path) = name.strip_prefix("file:") {
            return Ok(Self::from_file(path)?);
        }
        Err(Error::UnknownProblem(name.to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, MeshError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| MeshError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Ok(Problem::Polynomial(Polynomial::parse(&text)?))
    }

    pub fn exact(&self, p: Point2) -> f64 {
        match self {
            Problem::SinSin => (PI * p.x).sin() * (PI * p.y).sin(),
            Problem::Polynomial(q) => q.value(p),
        }
    }

    pub fn gradient(&self, p: Point2) -> Point2 {
        match self {
            Problem::SinSin => Point2::new(
                PI * (PI * p.x).cos() * (PI * p.y).sin(),
                PI * (PI * p.x).sin() * (PI * p.y).cos(),
            ),
            Problem::Polynomial(q) => q.gradient(p),
        }
    }

    pub fn source(&self, p: Point2) -> f64 {
        match self {
            Problem::SinSin => 2.0 * PI * PI * self.exact(p),
            Problem::Polynomial(q) => -q.laplacian(p),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::SinSin => f.write_str("sinsin"),
            Problem::Polynomial(q) => write!(f, "polynomial of degree {}", q.degree()),
        }
    }
}
