//! Polygonal meshes: container with conformity checks, POLY2D text format,
//! structured generators, straight-line cuts, merging and global dof numbering.

mod cut;
mod dofmap;
mod generate;
mod io;
mod merge;

use std::collections::HashMap;

pub use cut::{cut_mesh, cut_mesh_where, CutLine};
pub use dofmap::{GlobalDof, GlobalDofMap};
pub use generate::{generate, MeshKind};
pub use io::{parse_poly2d, read_mesh, to_poly2d, write_mesh};
pub use merge::{merge_meshes, DEFAULT_MERGE_TOL};

use crate::error::MeshError;
use crate::geometry::{segment_distance, Facet, Point2};

/// Mesh edge between two vertices, stored with `v[0] < v[1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshEdge {
    pub v: [usize; 2],
    /// Elements containing the edge, in increasing id order.
    pub elements: Vec<usize>,
}

impl MeshEdge {
    pub fn is_boundary(&self) -> bool {
        self.elements.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyMesh {
    vertices: Vec<Point2>,
    elements: Vec<Facet>,
    edges: Vec<MeshEdge>,
    edge_index: HashMap<(usize, usize), usize>,
    diameter: f64,
}

fn canonical(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn bounding_diameter(points: &[Point2]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    lo.distance(hi)
}

impl PolyMesh {
    /// Builds a mesh from facets whose loop ids index `vertices`, and checks
    /// every mesh invariant.
    pub fn new(vertices: Vec<Point2>, elements: Vec<Facet>) -> Result<Self, MeshError> {
        for (i, p) in vertices.iter().enumerate() {
            if !p.is_finite() {
                return Err(crate::error::GeometryError::NonFinite(i).into());
            }
        }
        for (e, f) in elements.iter().enumerate() {
            for l in f.loops() {
                for (&id, &p) in l.ids().iter().zip(l.points()) {
                    if vertices.get(id) != Some(&p) {
                        return Err(MeshError::InvariantViolation {
                            element: e,
                            message: format!("vertex {id} does not match the vertex table"),
                        });
                    }
                }
            }
        }
        let diameter = bounding_diameter(&vertices);
        let mut edge_index = HashMap::new();
        let mut edges: Vec<MeshEdge> = Vec::new();
        for (e, f) in elements.iter().enumerate() {
            for er in f.edges() {
                let key = canonical(er.start_id, er.end_id);
                let id = *edge_index.entry(key).or_insert_with(|| {
                    edges.push(MeshEdge {
                        v: [key.0, key.1],
                        elements: Vec::new(),
                    });
                    edges.len() - 1
                });
                edges[id].elements.push(e);
            }
        }
        // renumber edges in canonical order so ids do not depend on traversal
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&i| edges[i].v);
        let edges: Vec<MeshEdge> = order.iter().map(|&i| edges[i].clone()).collect();
        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.v[0], e.v[1]), i))
            .collect();
        let mesh = Self {
            vertices,
            elements,
            edges,
            edge_index,
            diameter,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Builds facets from index loops (first loop outer, the rest holes),
    /// correcting orientations with a warning.
    pub fn from_loops(vertices: Vec<Point2>, loops: &[Vec<Vec<usize>>]) -> Result<Self, MeshError> {
        let mut elements = Vec::with_capacity(loops.len());
        for (e, l) in loops.iter().enumerate() {
            let Some((outer, holes)) = l.split_first() else {
                return Err(MeshError::InvariantViolation {
                    element: e,
                    message: "element has no loops".into(),
                });
            };
            let (f, _) = Facet::from_indexed(&vertices, outer, holes).map_err(|err| {
                MeshError::InvariantViolation {
                    element: e,
                    message: err.to_string(),
                }
            })?;
            elements.push(f);
        }
        Self::new(vertices, elements)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn elements(&self) -> &[Facet] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Facet {
        &self.elements[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[MeshEdge] {
        &self.edges
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&canonical(a, b)).copied()
    }

    pub fn num_boundary_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.is_boundary()).count()
    }

    /// Diagonal of the vertex bounding box.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn total_area(&self) -> f64 {
        self.elements.iter().map(Facet::area).sum()
    }

    /// Largest element diameter.
    pub fn mesh_size(&self) -> f64 {
        self.elements
            .iter()
            .map(Facet::diameter)
            .fold(0.0, f64::max)
    }

    /// Flags of vertices lying on a boundary edge.
    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for e in self.edges.iter().filter(|e| e.is_boundary()) {
            flags[e.v[0]] = true;
            flags[e.v[1]] = true;
        }
        flags
    }

    /// Number of element vertices whose two adjacent element edges are
    /// collinear (counted once per element corner).
    pub fn hanging_corners(&self) -> usize {
        let mut count = 0;
        for f in &self.elements {
            for l in f.loops() {
                let pts = l.points();
                let n = pts.len();
                for i in 0..n {
                    let a = pts[(i + n - 1) % n];
                    let b = pts[i];
                    let c = pts[(i + 1) % n];
                    let u = b - a;
                    let v = c - b;
                    if u.cross(v).abs() <= 1e-12 * u.norm() * v.norm() && u.dot(v) > 0.0 {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Checks conformity, vertex uniqueness and vertex usage.
    pub fn validate(&self) -> Result<(), MeshError> {
        let tol = 1e-12 * self.diameter;

        let mut used = vec![false; self.vertices.len()];
        for f in &self.elements {
            for id in f.vertex_ids() {
                used[id] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(MeshError::Invalid(format!(
                "vertex {v} is not used by any element"
            )));
        }

        let by_x = self.sorted_by_x();
        for (k, &i) in by_x.iter().enumerate() {
            for &j in &by_x[k + 1..] {
                if self.vertices[j].x - self.vertices[i].x > tol {
                    break;
                }
                if self.vertices[i].distance(self.vertices[j]) <= tol {
                    return Err(MeshError::Invalid(format!(
                        "vertices {} and {} coincide",
                        i.min(j),
                        i.max(j)
                    )));
                }
            }
        }

        for e in &self.edges {
            match e.elements.len() {
                1 => {}
                2 => {
                    let [a, b] = e.elements[..] else {
                        unreachable!()
                    };
                    let dir = |el: usize| {
                        self.elements[el]
                            .edges()
                            .iter()
                            .any(|r| r.start_id == e.v[0] && r.end_id == e.v[1])
                    };
                    if dir(a) == dir(b) {
                        return Err(MeshError::InvariantViolation {
                            element: b,
                            message: format!(
                                "edge ({}, {}) has the same orientation in elements {a} and {b}",
                                e.v[0], e.v[1]
                            ),
                        });
                    }
                }
                _ => {
                    return Err(MeshError::InvariantViolation {
                        element: e.elements[2],
                        message: format!(
                            "edge ({}, {}) is shared by {} elements",
                            e.v[0],
                            e.v[1],
                            e.elements.len()
                        ),
                    });
                }
            }
        }

        // a vertex strictly inside a boundary edge is a T-junction
        let xs: Vec<f64> = by_x.iter().map(|&i| self.vertices[i].x).collect();
        for e in self.edges.iter().filter(|e| e.is_boundary()) {
            let a = self.vertices[e.v[0]];
            let b = self.vertices[e.v[1]];
            let lo = xs.partition_point(|&x| x < a.x.min(b.x) - tol);
            let hi = xs.partition_point(|&x| x <= a.x.max(b.x) + tol);
            for &v in &by_x[lo..hi] {
                if v == e.v[0] || v == e.v[1] {
                    continue;
                }
                let p = self.vertices[v];
                if segment_distance(p, a, b) <= tol && p.distance(a) > tol && p.distance(b) > tol {
                    return Err(MeshError::InvariantViolation {
                        element: e.elements[0],
                        message: format!(
                            "vertex {v} lies inside edge ({}, {}) without being one of its vertices",
                            e.v[0], e.v[1]
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    fn sorted_by_x(&self) -> Vec<usize> {
        let mut by_x: Vec<usize> = (0..self.vertices.len()).collect();
        by_x.sort_by(|&i, &j| {
            self.vertices[i]
                .x
                .total_cmp(&self.vertices[j].x)
                .then(i.cmp(&j))
        });
        by_x
    }

    /// Index loops of every element (outer first).
    pub fn element_loops(&self) -> Vec<Vec<Vec<usize>>> {
        self.elements
            .iter()
            .map(|f| f.loops().map(|l| l.ids().to_vec()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests;
