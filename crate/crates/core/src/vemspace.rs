//! Degrees of freedom of the local virtual element space `V_h(E)`.
//!
//! * vertex values,
//! * values at the `k - 1` interior Gauss-Lobatto nodes of every edge,
//! * scaled moments `(1/|E|) ∫_E v m_α` for `|α| <= k - 2`.
//!
//! Basis functions are never constructed; a [`DofDescription`] carries all
//! the data needed to integrate them against polynomials.

use crate::error::SpaceError;
use crate::geometry::{EdgeRef, Facet, Point2};
use crate::monomials::{basis_index, dim_p, MonomialBasis};
use crate::quadrature::{gauss_legendre_unit, gauss_lobatto_unit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DofDescription {
    Vertex {
        vertex_id: usize,
        point: Point2,
    },
    EdgePoint {
        /// Local edge index in the facet's boundary order.
        edge: usize,
        /// Position of the node along the traversal direction, in `(0, 1)`.
        t: f64,
        /// Gauss-Lobatto weight on `[0, 1]`.
        weight: f64,
        point: Point2,
    },
    Moment {
        element_id: usize,
        ex: usize,
        ey: usize,
    },
}

impl DofDescription {
    /// The evaluation point of a vertex or edge dof.
    pub fn point(&self) -> Option<Point2> {
        match *self {
            DofDescription::Vertex { point, .. } | DofDescription::EdgePoint { point, .. } => {
                Some(point)
            }
            DofDescription::Moment { .. } => None,
        }
    }
}

/// Number of local dofs: `N_V k + π_{k-2}`.
pub fn local_dof_count(num_vertices: usize, k: usize) -> usize {
    num_vertices * k + dim_p(k as isize - 2)
}

/// Ordered dofs of one element: vertices in boundary order, then the edge
/// nodes edge by edge in traversal direction, then the moments in monomial
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDofLayout {
    element_id: usize,
    degree: usize,
    num_vertices: usize,
    dofs: Vec<DofDescription>,
    edges: Vec<EdgeRef>,
    /// Gauss-Lobatto nodes and weights on `[0, 1]` (`k + 1` of them).
    gl_nodes: Vec<f64>,
    gl_weights: Vec<f64>,
}

impl LocalDofLayout {
    pub fn new(facet: &Facet, element_id: usize, k: usize) -> Result<Self, SpaceError> {
        if k == 0 {
            return Err(SpaceError::InvalidDegree);
        }
        let edges = facet.edges();
        let nv = edges.len();
        let (gl_nodes, gl_weights) = gauss_lobatto_unit(k + 1);
        let mut dofs = Vec::with_capacity(local_dof_count(nv, k));
        for e in &edges {
            dofs.push(DofDescription::Vertex {
                vertex_id: e.start_id,
                point: e.start,
            });
        }
        for (ei, e) in edges.iter().enumerate() {
            for j in 1..k {
                dofs.push(DofDescription::EdgePoint {
                    edge: ei,
                    t: gl_nodes[j],
                    weight: gl_weights[j],
                    point: e.point_at(gl_nodes[j]),
                });
            }
        }
        if k >= 2 {
            for m in MonomialBasis::new(k - 2).entries() {
                dofs.push(DofDescription::Moment {
                    element_id,
                    ex: m.ex,
                    ey: m.ey,
                });
            }
        }
        Ok(Self {
            element_id,
            degree: k,
            num_vertices: nv,
            dofs,
            edges,
            gl_nodes,
            gl_weights,
        })
    }

    pub fn element_id(&self) -> usize {
        self.element_id
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    pub fn dofs(&self) -> &[DofDescription] {
        &self.dofs
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn gl_nodes(&self) -> &[f64] {
        &self.gl_nodes
    }

    pub fn gl_weights(&self) -> &[f64] {
        &self.gl_weights
    }

    /// Index of the first moment dof.
    pub fn moment_offset(&self) -> usize {
        self.num_vertices * self.degree
    }

    pub fn num_moments(&self) -> usize {
        dim_p(self.degree as isize - 2)
    }

    /// Local dof indices of the `k + 1` Gauss-Lobatto nodes of edge `e`,
    /// from its start vertex to its end vertex.
    pub fn edge_dofs(&self, e: usize) -> Vec<usize> {
        let k = self.degree;
        let nv = self.num_vertices;
        let loop_start = self.loop_start(e);
        let loop_len = self.loop_len(e);
        let next = loop_start + (e - loop_start + 1) % loop_len;
        let mut out = Vec::with_capacity(k + 1);
        out.push(e);
        out.extend((1..k).map(|j| nv + e * (k - 1) + (j - 1)));
        out.push(next);
        out
    }

    fn loop_start(&self, e: usize) -> usize {
        // loops are stored contiguously
        let mut start = 0;
        while start < e && self.edges[start].loop_index != self.edges[e].loop_index {
            start += 1;
        }
        start
    }

    fn loop_len(&self, e: usize) -> usize {
        let li = self.edges[e].loop_index;
        self.edges.iter().filter(|x| x.loop_index == li).count()
    }

    /// Edge trace of the dof vector `values` on local edge `e`.
    pub fn trace(&self, e: usize, values: &[f64]) -> EdgeTrace {
        EdgeTrace::new(
            self.gl_nodes.clone(),
            self.edge_dofs(e).iter().map(|&i| values[i]).collect(),
        )
    }

    /// `(1/|E|) ∫_E φ_i m_(a,b)`, known exactly from the dof type.
    pub fn moment_dof_value(&self, i: usize, a: usize, b: usize) -> Result<f64, SpaceError> {
        let kk = self.degree as isize - 2;
        if (a + b) as isize > kk {
            return Err(SpaceError::OutOfRangeExponents(a, b, kk));
        }
        Ok(match self.dofs[i] {
            DofDescription::Moment { ex, ey, .. } if ex == a && ey == b => 1.0,
            _ => 0.0,
        })
    }

    /// Local index of the moment dof with exponents `(a, b)`.
    pub fn moment_dof_index(&self, a: usize, b: usize) -> Option<usize> {
        if self.degree < 2 || a + b > self.degree - 2 {
            return None;
        }
        Some(self.moment_offset() + basis_index(a, b))
    }
}

/// The degree-`k` polynomial a virtual function takes on one edge,
/// represented by its values at the Gauss-Lobatto nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeTrace {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl EdgeTrace {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(nodes.len(), values.len());
        Self { nodes, values }
    }

    /// Trace of degree `k` from its `k + 1` node values.
    pub fn from_values(values: Vec<f64>) -> Self {
        let (nodes, _) = gauss_lobatto_unit(values.len());
        Self::new(nodes, values)
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Lagrange interpolation at `t ∈ [0, 1]`.
    pub fn evaluate(&self, t: f64) -> f64 {
        let n = self.nodes.len();
        let mut s = 0.0;
        for i in 0..n {
            let mut l = 1.0;
            for j in 0..n {
                if i != j {
                    l *= (t - self.nodes[j]) / (self.nodes[i] - self.nodes[j]);
                }
            }
            s += self.values[i] * l;
        }
        s
    }

    /// `∫_e trace * g de` for `g` a polynomial of degree `g_degree` along the
    /// edge; exact.
    pub fn integrate_against(
        &self,
        e: &EdgeRef,
        g_degree: usize,
        g: impl Fn(Point2) -> f64,
    ) -> f64 {
        let n = (self.degree() + g_degree) / 2 + 1;
        let (t, w) = gauss_legendre_unit(n);
        e.length
            * t.iter()
                .zip(&w)
                .map(|(&t, &w)| w * self.evaluate(t) * g(e.point_at(t)))
                .sum::<f64>()
    }
}
