//! Global numbering of the degrees of freedom.

use super::PolyMesh;
use crate::geometry::{EdgeRef, Point2};
use crate::monomials::dim_p;
use crate::quadrature::gauss_lobatto_unit;

/// What a global dof is attached to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GlobalDof {
    Vertex(usize),
    /// `node` in `1..k`, counted from the lower vertex id of the edge.
    Edge {
        edge: usize,
        node: usize,
    },
    Moment {
        element: usize,
        index: usize,
    },
}

/// Vertex dofs by vertex id, then interior edge dofs by canonical edge id
/// and node, then moments by element id and monomial index.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalDofMap {
    degree: usize,
    num_vertices: usize,
    num_edges: usize,
    moments_per_element: usize,
    local_to_global: Vec<Vec<usize>>,
}

impl GlobalDofMap {
    pub fn new(mesh: &PolyMesh, k: usize) -> Self {
        let nv = mesh.num_vertices();
        let ne = mesh.num_edges();
        let per_edge = k.saturating_sub(1);
        let moments = dim_p(k as isize - 2);
        let moment_base = nv + ne * per_edge;
        let local_to_global = mesh
            .elements()
            .iter()
            .enumerate()
            .map(|(el, f)| {
                let edges = f.edges();
                let mut map = Vec::with_capacity(edges.len() * k + moments);
                map.extend(edges.iter().map(|e| e.start_id));
                for e in &edges {
                    let id = mesh
                        .edge_id(e.start_id, e.end_id)
                        .expect("edge table is complete");
                    let forward = e.start_id < e.end_id;
                    for j in 1..k {
                        let node = if forward { j } else { k - j };
                        map.push(nv + id * per_edge + node - 1);
                    }
                }
                map.extend((0..moments).map(|t| moment_base + el * moments + t));
                map
            })
            .collect();
        Self {
            degree: k,
            num_vertices: nv,
            num_edges: ne,
            moments_per_element: moments,
            local_to_global,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.num_vertices
            + self.num_edges * self.degree.saturating_sub(1)
            + self.local_to_global.len() * self.moments_per_element
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Global indices of the local dofs of `element`, in local order.
    pub fn element_dofs(&self, element: usize) -> &[usize] {
        &self.local_to_global[element]
    }

    pub fn describe(&self, global: usize) -> GlobalDof {
        let per_edge = self.degree.saturating_sub(1);
        if global < self.num_vertices {
            return GlobalDof::Vertex(global);
        }
        let g = global - self.num_vertices;
        if g < self.num_edges * per_edge {
            return GlobalDof::Edge {
                edge: g / per_edge,
                node: g % per_edge + 1,
            };
        }
        let g = g - self.num_edges * per_edge;
        GlobalDof::Moment {
            element: g / self.moments_per_element,
            index: g % self.moments_per_element,
        }
    }

    /// Location of every point-value dof (`None` for moments).
    pub fn dof_points(&self, mesh: &PolyMesh) -> Vec<Option<Point2>> {
        let (nodes, _) = gauss_lobatto_unit(self.degree + 1);
        (0..self.len())
            .map(|g| match self.describe(g) {
                GlobalDof::Vertex(v) => Some(mesh.vertices()[v]),
                GlobalDof::Edge { edge, node } => {
                    let [a, b] = mesh.edges()[edge].v;
                    let e = EdgeRef::segment(mesh.vertices()[a], mesh.vertices()[b]);
                    Some(e.point_at(nodes[node]))
                }
                GlobalDof::Moment { .. } => None,
            })
            .collect()
    }

    /// Flags of the dofs on boundary edges (vertex and edge values).
    pub fn boundary_dofs(&self, mesh: &PolyMesh) -> Vec<bool> {
        let mut flags = vec![false; self.len()];
        let per_edge = self.degree.saturating_sub(1);
        for (id, e) in mesh.edges().iter().enumerate() {
            if e.is_boundary() {
                flags[e.v[0]] = true;
                flags[e.v[1]] = true;
                for j in 0..per_edge {
                    flags[self.num_vertices + id * per_edge + j] = true;
                }
            }
        }
        flags
    }
}
