//! Local matrices of the virtual element method on one polygon.
//!
//! With `N` local dofs and `π_k` scaled monomials:
//!
//! | matrix | size      | entries                                            |
//! |--------|-----------|----------------------------------------------------|
//! | `D`    | `N × π_k` | `dof_i(m_α)`                                       |
//! | `H`    | `π_k × π_k` | `∫_E m_α m_β`                                    |
//! | `G`    | `π_k × π_k` | `∫_E ∇m_α·∇m_β`                                  |
//! | `B~`   | `π_k × N` | `∫_E ∇φ_i·∇m_α`, row 0 = boundary average of `φ_i` |
//! | `Π∇*`  | `π_k × N` | `G~⁻¹ B~`                                          |
//! | `Π∇`   | `N × N`   | `D Π∇*`                                            |
//! | `Π⁰*`  | `π_{k-2} × N` | `H_{k-2}⁻¹ C`                                  |
//!
//! `G~` is `G` with row 0 replaced by the boundary averages of the monomials,
//! so that `G~ = B~ D` holds exactly.

mod cache;

use nalgebra::{DMatrix, DVector};

pub use cache::{find_or_compute, ElementMatrixCache, MatrixRegistry, MatrixRoutine, MatrixTag};

use crate::error::LocalMatrixError;
use crate::geometry::{Facet, Point2};
use crate::monomials::{dim_p, Frame, MonomialBasis};
use crate::quadrature::{polygon_rule, Rule2};
use crate::vemspace::{DofDescription, LocalDofLayout};

pub type DenseMatrix = DMatrix<f64>;

/// One polygon with its dof layout, monomial frame and area quadrature.
#[derive(Debug, Clone)]
pub struct VemElement<'a> {
    pub id: usize,
    pub facet: &'a Facet,
    pub degree: usize,
    pub layout: LocalDofLayout,
    pub frame: Frame,
    pub basis: MonomialBasis,
    /// Area rule of exactness `2k`.
    pub rule: Rule2,
}

impl<'a> VemElement<'a> {
    pub fn new(facet: &'a Facet, id: usize, degree: usize) -> Result<Self, LocalMatrixError> {
        let layout = LocalDofLayout::new(facet, id, degree)?;
        let rule = polygon_rule(facet, 2 * degree)?;
        Ok(Self {
            id,
            facet,
            degree,
            layout,
            frame: Frame::of_facet(facet),
            basis: MonomialBasis::new(degree),
            rule,
        })
    }

    pub fn num_dofs(&self) -> usize {
        self.layout.len()
    }

    pub fn num_monomials(&self) -> usize {
        self.basis.len()
    }

    /// Dof vector of a function given pointwise, with its moments computed
    /// by quadrature (exact when `u` is a polynomial of degree `<= k`).
    pub fn interpolate(&self, u: impl Fn(Point2) -> f64) -> DVector<f64> {
        let area = self.facet.area();
        let mut out = DVector::zeros(self.num_dofs());
        for (i, d) in self.layout.dofs().iter().enumerate() {
            out[i] = match *d {
                DofDescription::Vertex { point, .. } | DofDescription::EdgePoint { point, .. } => {
                    u(point)
                }
                DofDescription::Moment { ex, ey, .. } => {
                    let m = crate::monomials::ScaledMonomial::unit(ex, ey);
                    self.rule.integrate(|p| u(p) * m.evaluate(p, &self.frame)) / area
                }
            };
        }
        out
    }

    /// Dof vector of the polynomial with coefficients `c` in the element basis.
    pub fn polynomial_dofs(&self, c: &[f64]) -> DVector<f64> {
        let basis = &self.basis;
        let frame = self.frame;
        self.interpolate(|p| {
            basis
                .eval_all(p, &frame)
                .iter()
                .zip(c)
                .map(|(v, c)| v * c)
                .sum()
        })
    }
}

pub fn compute_d(el: &VemElement) -> Result<DenseMatrix, LocalMatrixError> {
    let n = el.num_dofs();
    let nk = el.num_monomials();
    let mut d = DMatrix::zeros(n, nk);
    let area = el.facet.area();
    let moment_rows: Vec<(usize, usize, usize)> = el
        .layout
        .dofs()
        .iter()
        .enumerate()
        .filter_map(|(i, d)| match *d {
            DofDescription::Moment { ex, ey, .. } => Some((i, ex, ey)),
            _ => None,
        })
        .collect();
    for (i, dof) in el.layout.dofs().iter().enumerate() {
        if let Some(p) = dof.point() {
            for (a, v) in el.basis.eval_all(p, &el.frame).into_iter().enumerate() {
                d[(i, a)] = v;
            }
        }
    }
    if !moment_rows.is_empty() {
        // products m_t m_α have degree <= 2k - 2
        for (p, w) in el.rule.iter() {
            let vals = el.basis.eval_all(p, &el.frame);
            for &(i, ex, ey) in &moment_rows {
                let mt = vals[crate::monomials::basis_index(ex, ey)];
                for a in 0..nk {
                    d[(i, a)] += w * mt * vals[a];
                }
            }
        }
        for &(i, _, _) in &moment_rows {
            for a in 0..nk {
                d[(i, a)] /= area;
            }
        }
    }
    Ok(d)
}

pub fn compute_h(el: &VemElement) -> Result<DenseMatrix, LocalMatrixError> {
    let nk = el.num_monomials();
    let mut h = DMatrix::zeros(nk, nk);
    for (p, w) in el.rule.iter() {
        let v = el.basis.eval_all(p, &el.frame);
        for a in 0..nk {
            for b in a..nk {
                h[(a, b)] += w * v[a] * v[b];
            }
        }
    }
    for a in 0..nk {
        for b in 0..a {
            h[(a, b)] = h[(b, a)];
        }
    }
    if h.clone().cholesky().is_none() {
        return Err(LocalMatrixError::SingularH);
    }
    Ok(h)
}

/// Raw `G_{αβ} = ∫_E ∇m_α·∇m_β`; row and column 0 are zero.
pub fn compute_g(el: &VemElement) -> Result<DenseMatrix, LocalMatrixError> {
    let nk = el.num_monomials();
    let mut g = DMatrix::zeros(nk, nk);
    for (p, w) in el.rule.iter() {
        let grads = el.basis.grad_all(p, &el.frame);
        for a in 1..nk {
            for b in a..nk {
                g[(a, b)] += w * grads[a].dot(grads[b]);
            }
        }
    }
    for a in 0..nk {
        for b in 0..a {
            g[(a, b)] = g[(b, a)];
        }
    }
    Ok(g)
}

/// `(1/|∂E|) ∫_{∂E} m_α` for every basis monomial.
pub fn boundary_average_row(el: &VemElement) -> Vec<f64> {
    let nk = el.num_monomials();
    let mut row = vec![0.0; nk];
    let nodes = el.layout.gl_nodes();
    let weights = el.layout.gl_weights();
    for e in el.layout.edges() {
        for (t, w) in nodes.iter().zip(weights) {
            let v = el.basis.eval_all(e.point_at(*t), &el.frame);
            for a in 0..nk {
                row[a] += w * e.length * v[a];
            }
        }
    }
    let per = el.facet.perimeter();
    row.iter_mut().for_each(|r| *r /= per);
    row
}

/// `G` with row 0 replaced by the boundary averages of the monomials.
pub fn g_tilde(el: &VemElement, g: &DenseMatrix) -> DenseMatrix {
    let mut gt = g.clone();
    for (a, v) in boundary_average_row(el).into_iter().enumerate() {
        gt[(0, a)] = v;
    }
    gt
}

/// `B~`: integration by parts of `∫ ∇φ_i·∇m_α` with the bulk term read off
/// the moment dofs and the boundary term from the Gauss-Lobatto nodes; row 0
/// holds the boundary average of each basis function.
pub fn compute_b(el: &VemElement) -> Result<DenseMatrix, LocalMatrixError> {
    let n = el.num_dofs();
    let nk = el.num_monomials();
    let k = el.degree;
    let area = el.facet.area();
    let mut b = DMatrix::zeros(nk, n);
    let weights = el.layout.gl_weights();
    let nodes = el.layout.gl_nodes();

    for (ei, e) in el.layout.edges().iter().enumerate() {
        let idx = el.layout.edge_dofs(ei);
        for (j, &i) in idx.iter().enumerate() {
            let p = e.point_at(nodes[j]);
            let wl = weights[j] * e.length;
            b[(0, i)] += wl;
            for (a, m) in el.basis.entries().iter().enumerate().skip(1) {
                b[(a, i)] += wl * e.normal.dot(m.gradient(p, &el.frame));
            }
        }
    }
    let per = el.facet.perimeter();
    for i in 0..n {
        b[(0, i)] /= per;
    }

    if k >= 2 {
        for (a, m) in el.basis.entries().iter().enumerate().skip(1) {
            for t in m.laplacian(el.frame.scale) {
                let i = el
                    .layout
                    .moment_dof_index(t.ex, t.ey)
                    .expect("laplacian of a degree-k monomial has degree k-2");
                b[(a, i)] -= t.coeff * area;
            }
        }
    }
    Ok(b)
}

pub fn pi_nabla_star(
    el: &VemElement,
    g: &DenseMatrix,
    b: &DenseMatrix,
) -> Result<DenseMatrix, LocalMatrixError> {
    let gt = g_tilde(el, g);
    let lu = gt.lu();
    let u = lu.u();
    let diag: Vec<f64> = (0..u.nrows()).map(|i| u[(i, i)].abs()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if min.is_nan() || min <= 1e-14 * max {
        return Err(LocalMatrixError::SingularG);
    }
    lu.solve(b).ok_or(LocalMatrixError::SingularG)
}

pub fn pi_nabla(d: &DenseMatrix, pns: &DenseMatrix) -> DenseMatrix {
    d * pns
}

/// `Π⁰_{k-2}` coefficients; for `k = 1` the vertex average.
pub fn pi_zero_star(el: &VemElement, h: &DenseMatrix) -> Result<DenseMatrix, LocalMatrixError> {
    let n = el.num_dofs();
    let k = el.degree;
    if k == 1 {
        let nv = el.layout.num_vertices();
        return Ok(DMatrix::from_fn(1, n, |_, i| {
            if i < nv {
                1.0 / nv as f64
            } else {
                0.0
            }
        }));
    }
    let m = dim_p(k as isize - 2);
    let hk = h.view((0, 0), (m, m)).into_owned();
    let mut c = DMatrix::zeros(m, n);
    let area = el.facet.area();
    let off = el.layout.moment_offset();
    for a in 0..m {
        c[(a, off + a)] = area;
    }
    let chol = hk.cholesky().ok_or(LocalMatrixError::SingularH)?;
    Ok(chol.solve(&c))
}

/// `(Π∇*)ᵀ G Π∇* + (I - Π∇)ᵀ (I - Π∇)`, symmetrized.
pub fn stiffness(g: &DenseMatrix, pns: &DenseMatrix, pn: &DenseMatrix) -> DenseMatrix {
    let n = pn.nrows();
    let consistency = pns.transpose() * g * pns;
    let r = DMatrix::identity(n, n) - pn;
    let k = consistency + r.transpose() * &r;
    (&k + k.transpose()) * 0.5
}

/// Load vector `∫_E f Π⁰_{k-2} φ_i`, with `∫ f m_α` by quadrature of degree
/// `2k`; for `k = 1` the vertex averages of `f` and `φ_i`.
pub fn load_vector(el: &VemElement, pzs: &DenseMatrix, f: &dyn Fn(Point2) -> f64) -> DVector<f64> {
    let n = el.num_dofs();
    let area = el.facet.area();
    if el.degree == 1 {
        let nv = el.layout.num_vertices();
        let avg = el.facet.vertex_points().map(f).sum::<f64>() / nv as f64;
        return DVector::from_fn(n, |i, _| if i < nv { avg * area / nv as f64 } else { 0.0 });
    }
    let m = pzs.nrows();
    let mut mf = DVector::zeros(m);
    for (p, w) in el.rule.iter() {
        let fv = w * f(p);
        let v = el.basis.eval_all(p, &el.frame);
        for a in 0..m {
            mf[a] += fv * v[a];
        }
    }
    pzs.transpose() * mf
}

/// Maximum-norm relative error of the identity `G~ = B~ D`.
pub fn gbd_error(el: &VemElement, g: &DenseMatrix, b: &DenseMatrix, d: &DenseMatrix) -> f64 {
    let gt = g_tilde(el, g);
    let bd = b * d;
    let diff = (&gt - &bd).amax();
    diff / gt.amax()
}
