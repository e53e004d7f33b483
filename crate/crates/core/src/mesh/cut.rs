//! Splitting every element crossed by a straight line.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::PolyMesh;
use crate::error::MeshError;
use crate::geometry::{Facet, Loop, Point2};

/// The line `a x + b y = c` with `a² + b² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutLine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CutLine {
    /// Normalizes the coefficients.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, MeshError> {
        let n = a.hypot(b);
        if n == 0.0 || !n.is_finite() || !c.is_finite() {
            return Err(MeshError::InvalidLine);
        }
        Ok(Self {
            a: a / n,
            b: b / n,
            c: c / n,
        })
    }

    pub fn through(p: Point2, q: Point2) -> Result<Self, MeshError> {
        let d = q - p;
        Self::new(-d.y, d.x, -d.y * p.x + d.x * p.y)
    }

    pub fn signed_distance(&self, p: Point2) -> f64 {
        self.a * p.x + self.b * p.y - self.c
    }

    pub fn direction(&self) -> Point2 {
        Point2::new(-self.b, self.a)
    }
}

/// Cuts every element crossed by `line` into its pieces. Intersection points
/// are shared between the elements adjacent to a crossed edge. Vertices
/// closer to the line than `1e-10` times the mesh diameter are treated as
/// lying on it.
pub fn cut_mesh(mesh: &PolyMesh, line: &CutLine) -> Result<PolyMesh, MeshError> {
    cut_mesh_where(mesh, line, |_, _| true)
}

/// Like [`cut_mesh`], but only elements accepted by `select` are split. The
/// intersection points on their edges are inserted into the unselected
/// neighbors as hanging vertices.
pub fn cut_mesh_where(
    mesh: &PolyMesh,
    line: &CutLine,
    select: impl Fn(usize, &Facet) -> bool,
) -> Result<PolyMesh, MeshError> {
    let tol = 1e-10 * mesh.diameter();
    let mut vertices = mesh.vertices().to_vec();
    let mut sign: Vec<i8> = vertices
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let s = line.signed_distance(p);
            if s.abs() <= tol {
                if s != 0.0 {
                    log::warn!(
                        "cut line passes within {:e} of vertex {i}; snapped",
                        s.abs()
                    );
                }
                0
            } else if s > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let mut crossings: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pieces_of: Vec<Option<Vec<Facet>>> = Vec::with_capacity(mesh.num_elements());

    for (e, f) in mesh.elements().iter().enumerate() {
        let ids: Vec<usize> = f.vertex_ids().collect();
        let split = ids.iter().any(|&v| sign[v] > 0) && ids.iter().any(|&v| sign[v] < 0);
        if !split || !select(e, f) {
            pieces_of.push(None);
            continue;
        }
        for h in f.holes() {
            let touches = h.ids().iter().any(|&v| sign[v] == 0);
            let both = h.ids().iter().any(|&v| sign[v] > 0) && h.ids().iter().any(|&v| sign[v] < 0);
            if touches || both {
                return Err(MeshError::CutThroughHole(e));
            }
        }

        let mut ring = Vec::new();
        let outer = f.outer().ids();
        let n = outer.len();
        for i in 0..n {
            let (u, v) = (outer[i], outer[(i + 1) % n]);
            ring.push(u);
            if sign[u] * sign[v] < 0 {
                let key = (u.min(v), u.max(v));
                let id = *crossings.entry(key).or_insert_with(|| {
                    let (p, q) = (vertices[key.0], vertices[key.1]);
                    let (sp, sq) = (line.signed_distance(p), line.signed_distance(q));
                    let t = sp / (sp - sq);
                    vertices.push(p + (q - p) * t);
                    sign.push(0);
                    vertices.len() - 1
                });
                ring.push(id);
            }
        }

        let pieces = split_ring(&ring, &vertices, &sign, line, tol).map_err(|m| {
            MeshError::InvariantViolation {
                element: e,
                message: m,
            }
        })?;
        let mut holes_of: Vec<Vec<Vec<usize>>> = vec![Vec::new(); pieces.len()];
        for h in f.holes() {
            let p = h.points()[0];
            let owner = pieces.iter().position(|piece| {
                let pts: Vec<Point2> = piece.iter().map(|&v| vertices[v]).collect();
                Loop::new(piece.clone(), pts).is_ok_and(|l| l.winding_number(p) != 0)
            });
            match owner {
                Some(k) => holes_of[k].push(h.ids().to_vec()),
                None => return Err(MeshError::CutThroughHole(e)),
            }
        }
        let mut facets = Vec::with_capacity(pieces.len());
        for (piece, holes) in pieces.iter().zip(&holes_of) {
            let (facet, _) = Facet::from_indexed(&vertices, piece, holes).map_err(|err| {
                MeshError::InvariantViolation {
                    element: e,
                    message: format!("cut produced an invalid piece: {err}"),
                }
            })?;
            facets.push(facet);
        }
        pieces_of.push(Some(facets));
    }

    let mut elements = Vec::with_capacity(mesh.num_elements());
    for (e, (f, pieces)) in mesh.elements().iter().zip(pieces_of).enumerate() {
        match pieces {
            Some(p) => elements.extend(p),
            None if crossings.is_empty() => elements.push(f.clone()),
            None => {
                let loops: Vec<Vec<usize>> = f
                    .loops()
                    .map(|l| {
                        let ids = l.ids();
                        let n = ids.len();
                        let mut out = Vec::with_capacity(n);
                        for i in 0..n {
                            let (u, v) = (ids[i], ids[(i + 1) % n]);
                            out.push(u);
                            if let Some(&x) = crossings.get(&(u.min(v), u.max(v))) {
                                out.push(x);
                            }
                        }
                        out
                    })
                    .collect();
                let (facet, _) =
                    Facet::from_indexed(&vertices, &loops[0], &loops[1..]).map_err(|err| {
                        MeshError::InvariantViolation {
                            element: e,
                            message: err.to_string(),
                        }
                    })?;
                elements.push(facet);
            }
        }
    }
    PolyMesh::new(vertices, elements)
}

/// Splits a counter-clockwise ring, whose crossing points are already
/// inserted, along the chords of `line` lying inside it.
fn split_ring(
    ring: &[usize],
    vertices: &[Point2],
    sign: &[i8],
    line: &CutLine,
    tol: f64,
) -> Result<Vec<Vec<usize>>, String> {
    let m = ring.len();
    let pts: Vec<Point2> = ring.iter().map(|&v| vertices[v]).collect();
    let outline = Loop::new(ring.to_vec(), pts.clone()).map_err(|e| e.to_string())?;
    let dir = line.direction();

    let mut on_line: Vec<usize> = (0..m).filter(|&i| sign[ring[i]] == 0).collect();
    on_line.sort_by(|&i, &j| pts[i].dot(dir).total_cmp(&pts[j].dot(dir)));

    let mut adjacency: Vec<Vec<usize>> = (0..m).map(|i| vec![(i + 1) % m]).collect();
    for w in on_line.windows(2) {
        let (i, j) = (w[0], w[1]);
        let mid = pts[i].lerp(pts[j], 0.5);
        if outline.winding_number(mid) != 0 && outline.boundary_distance(mid) > tol {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
    }

    let angle = |from: Point2, to: Point2| {
        // counter-clockwise angle in (0, 2π]
        let a = from.cross(to).atan2(from.dot(to));
        if a <= 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    };

    let mut used = std::collections::HashSet::new();
    let mut pieces = Vec::new();
    for start in 0..m {
        for &first in &adjacency[start] {
            if used.contains(&(start, first)) {
                continue;
            }
            let mut piece = Vec::new();
            let (mut u, mut v) = (start, first);
            loop {
                if !used.insert((u, v)) {
                    return Err("inconsistent cut traversal".into());
                }
                piece.push(ring[u]);
                let back = pts[u] - pts[v];
                let w = adjacency[v]
                    .iter()
                    .copied()
                    .filter(|&w| w != u || adjacency[v].len() == 1)
                    .max_by(|&a, &b| {
                        angle(back, pts[a] - pts[v]).total_cmp(&angle(back, pts[b] - pts[v]))
                    })
                    .expect("every ring vertex has a successor");
                u = v;
                v = w;
                if (u, v) == (start, first) {
                    break;
                }
                if piece.len() > 2 * m {
                    return Err("cut traversal did not close".into());
                }
            }
            pieces.push(piece);
        }
    }
    Ok(pieces)
}
