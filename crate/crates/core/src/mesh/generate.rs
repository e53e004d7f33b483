//! Structured meshes of the unit square.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::PolyMesh;
use crate::error::MeshError;
use crate::geometry::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeshKind {
    Quads,
    Triangles,
    /// Quads with interior vertices moved by
    /// `(x, y) + 0.1 sin(2πx) sin(2πy) (1, 1)`.
    DistortedQuads,
}

impl MeshKind {
    pub fn name(&self) -> &'static str {
        match self {
            MeshKind::Quads => "quads",
            MeshKind::Triangles => "triangles",
            MeshKind::DistortedQuads => "distortedQuads",
        }
    }
}

impl fmt::Display for MeshKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeshKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quads" => Ok(MeshKind::Quads),
            "triangles" => Ok(MeshKind::Triangles),
            "distortedQuads" | "distorted-quads" | "distorted" => Ok(MeshKind::DistortedQuads),
            _ => Err(format!(
                "unknown mesh kind '{s}' (quads, triangles, distortedQuads)"
            )),
        }
    }
}

fn distort(p: Point2) -> Point2 {
    let s = 0.1 * (2.0 * PI * p.x).sin() * (2.0 * PI * p.y).sin();
    Point2::new(p.x + s, p.y + s)
}

/// `n × n` subdivision of the unit square. Vertex `(i, j)` has id
/// `j (n + 1) + i`.
pub fn generate(kind: MeshKind, n: usize) -> Result<PolyMesh, MeshError> {
    if n == 0 {
        return Err(MeshError::Invalid(
            "number of divisions must be at least 1".into(),
        ));
    }
    let h = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            // exact boundary coordinates
            let x = if i == n { 1.0 } else { i as f64 * h };
            let y = if j == n { 1.0 } else { j as f64 * h };
            let p = Point2::new(x, y);
            let interior = i > 0 && i < n && j > 0 && j < n;
            vertices.push(if kind == MeshKind::DistortedQuads && interior {
                distort(p)
            } else {
                p
            });
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut loops = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            match kind {
                MeshKind::Quads | MeshKind::DistortedQuads => loops.push(vec![vec![a, b, c, d]]),
                MeshKind::Triangles => {
                    loops.push(vec![vec![a, b, c]]);
                    loops.push(vec![vec![a, c, d]]);
                }
            }
        }
    }
    PolyMesh::from_loops(vertices, &loops)
}
