//! Global assembly, Dirichlet conditions, solve and error norms.

mod cg;
mod sparse;

use nalgebra::DVector;
use rayon::prelude::*;

pub use cg::{conjugate_gradient, SolveReport, DEFAULT_TOLERANCE};
pub use sparse::CsrMatrix;

use crate::error::SolveError;
use crate::geometry::Point2;
use crate::localmat::{
    find_or_compute, load_vector, DenseMatrix, ElementMatrixCache, MatrixRegistry, MatrixTag,
    VemElement,
};
use crate::mesh::{GlobalDofMap, PolyMesh};
use crate::quadrature::polygon_rule;

pub type ScalarField<'a> = &'a (dyn Fn(Point2) -> f64 + Sync);

/// Assembled stiffness matrix and load vector before boundary conditions.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub dofs: GlobalDofMap,
    /// `Π∇*` of every element, kept for post-processing.
    pub projections: Vec<DenseMatrix>,
}

/// Stiffness and load of one element with its projector.
struct ElementContribution {
    stiffness: DenseMatrix,
    load: DVector<f64>,
    projection: DenseMatrix,
}

fn element_contribution(
    registry: &MatrixRegistry,
    mesh: &PolyMesh,
    e: usize,
    k: usize,
    f: ScalarField,
) -> Result<ElementContribution, SolveError> {
    let wrap = |source| SolveError::Element { element: e, source };
    let el = VemElement::new(mesh.element(e), e, k).map_err(wrap)?;
    let mut cache = ElementMatrixCache::new();
    let stiffness = find_or_compute(registry, &mut cache, &el, MatrixTag::Stiffness)
        .map_err(wrap)?
        .clone();
    let pzs = find_or_compute(registry, &mut cache, &el, MatrixTag::PiZeroStar).map_err(wrap)?;
    let load = load_vector(&el, pzs, f);
    let projection = cache
        .find(MatrixTag::PiNablaStar)
        .expect("computed with the stiffness")
        .clone();
    Ok(ElementContribution {
        stiffness,
        load,
        projection,
    })
}

/// Assembles `Σ_E K_E` and `Σ_E b_E`. Elements are processed in parallel and
/// the contributions are summed in a fixed order, so the result is bitwise
/// independent of the element order and the thread count.
pub fn assemble(mesh: &PolyMesh, k: usize, f: ScalarField) -> Result<SparseSystem, SolveError> {
    let registry = MatrixRegistry::standard();
    let dofs = GlobalDofMap::new(mesh, k);
    let contributions = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| element_contribution(&registry, mesh, e, k, f))
        .collect::<Result<Vec<_>, _>>()?;

    let mut triplets = Vec::new();
    let mut loads = Vec::new();
    for (e, c) in contributions.iter().enumerate() {
        let map = dofs.element_dofs(e);
        for (i, &gi) in map.iter().enumerate() {
            for (j, &gj) in map.iter().enumerate() {
                triplets.push((gi, gj, c.stiffness[(i, j)]));
            }
            loads.push((gi, c.load[i]));
        }
    }
    let n = dofs.len();
    let matrix = CsrMatrix::from_triplets(n, n, triplets);
    loads.par_sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut rhs = vec![0.0; n];
    for (i, v) in loads {
        rhs[i] += v;
    }
    Ok(SparseSystem {
        matrix,
        rhs,
        dofs,
        projections: contributions.into_iter().map(|c| c.projection).collect(),
    })
}

/// Prescribed values on the dofs of boundary edges.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletData {
    pub constrained: Vec<bool>,
    /// Prescribed value for constrained dofs, zero elsewhere.
    pub values: Vec<f64>,
}

impl DirichletData {
    /// Samples `g` at the vertex and edge-node dofs of every boundary edge,
    /// hole boundaries included.
    pub fn new(mesh: &PolyMesh, dofs: &GlobalDofMap, g: ScalarField) -> Self {
        let constrained = dofs.boundary_dofs(mesh);
        let points = dofs.dof_points(mesh);
        let values = constrained
            .iter()
            .zip(&points)
            .map(|(&c, p)| match (c, p) {
                (true, Some(p)) => g(*p),
                _ => 0.0,
            })
            .collect();
        Self {
            constrained,
            values,
        }
    }

    pub fn num_constrained(&self) -> usize {
        self.constrained.iter().filter(|&&c| c).count()
    }
}

/// System restricted to the free dofs.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Global index of every free dof.
    pub free: Vec<usize>,
    pub dirichlet: DirichletData,
}

impl ReducedSystem {
    /// Full dof vector from values on the free dofs.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut full = self.dirichlet.values.clone();
        for (&g, &v) in self.free.iter().zip(x) {
            full[g] = v;
        }
        full
    }
}

/// Symmetric elimination: constrained columns move to the right-hand side.
pub fn apply_dirichlet(sys: &SparseSystem, data: DirichletData) -> ReducedSystem {
    let n = sys.rhs.len();
    let mut position = vec![usize::MAX; n];
    let mut free = Vec::new();
    for (i, (pos, &fixed)) in position.iter_mut().zip(&data.constrained).enumerate() {
        if !fixed {
            *pos = free.len();
            free.push(i);
        }
    }
    let mut triplets = Vec::new();
    let mut rhs = Vec::with_capacity(free.len());
    for &i in &free {
        let (cols, vals) = sys.matrix.row(i);
        let mut lifted = Vec::new();
        for (&j, &v) in cols.iter().zip(vals) {
            if data.constrained[j] {
                lifted.push(v * data.values[j]);
            } else {
                triplets.push((position[i], position[j], v));
            }
        }
        rhs.push(sys.rhs[i] - lifted.iter().sum::<f64>());
    }
    let m = free.len();
    ReducedSystem {
        matrix: CsrMatrix::from_triplets(m, m, triplets),
        rhs,
        free,
        dirichlet: data,
    }
}

/// Solves the reduced system and returns the full dof vector.
pub fn solve(
    reduced: &ReducedSystem,
    tol: f64,
    max_iter: Option<usize>,
) -> Result<(Vec<f64>, SolveReport), SolveError> {
    let (x, report) = conjugate_gradient(&reduced.matrix, &reduced.rhs, tol, max_iter)?;
    Ok((reduced.expand(&x), report))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub h1_semi: f64,
}

/// `||u - Π∇u_h||` in L² and the H¹ seminorm, element by element, with
/// polygon rules of exactness `2k + 2`.
pub fn error_norms(
    mesh: &PolyMesh,
    sys: &SparseSystem,
    solution: &[f64],
    u: ScalarField,
    grad_u: &(dyn Fn(Point2) -> Point2 + Sync),
) -> Result<ErrorNorms, SolveError> {
    let k = sys.dofs.degree();
    let basis = crate::monomials::MonomialBasis::new(k);
    let parts = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            let f = mesh.element(e);
            let frame = crate::monomials::Frame::of_facet(f);
            let local = DVector::from_iterator(
                sys.dofs.element_dofs(e).len(),
                sys.dofs.element_dofs(e).iter().map(|&g| solution[g]),
            );
            let coeffs = &sys.projections[e] * local;
            let rule = polygon_rule(f, 2 * k + 2)?;
            let (mut l2, mut h1) = (0.0, 0.0);
            for (p, w) in rule.iter() {
                let vals = basis.eval_all(p, &frame);
                let grads = basis.grad_all(p, &frame);
                let uh: f64 = vals.iter().zip(coeffs.iter()).map(|(v, c)| v * c).sum();
                let guh = grads
                    .iter()
                    .zip(coeffs.iter())
                    .fold(Point2::new(0.0, 0.0), |acc, (g, &c)| acc + *g * c);
                let du = u(p) - uh;
                let dg = grad_u(p) - guh;
                l2 += w * du * du;
                h1 += w * dg.dot(dg);
            }
            Ok((l2, h1))
        })
        .collect::<Result<Vec<_>, SolveError>>()?;
    let (l2, h1) = parts
        .iter()
        .fold((0.0, 0.0), |acc, &(a, b)| (acc.0 + a, acc.1 + b));
    Ok(ErrorNorms {
        l2: l2.sqrt(),
        h1_semi: h1.sqrt(),
    })
}

/// Polynomial coefficients of `Π∇u_h` on every element.
pub fn projection_coefficients(sys: &SparseSystem, solution: &[f64]) -> Vec<Vec<f64>> {
    sys.projections
        .iter()
        .enumerate()
        .map(|(e, p)| {
            let dofs = sys.dofs.element_dofs(e);
            let local = DVector::from_iterator(dofs.len(), dofs.iter().map(|&g| solution[g]));
            (p * local).iter().copied().collect()
        })
        .collect()
}

/// Dof vector of a function: point values, and moments by quadrature of
/// exactness `2k`.
pub fn interpolate(
    mesh: &PolyMesh,
    dofs: &GlobalDofMap,
    u: ScalarField,
) -> Result<Vec<f64>, SolveError> {
    let k = dofs.degree();
    let mut out = vec![0.0; dofs.len()];
    for (e, f) in mesh.elements().iter().enumerate() {
        let el = VemElement::new(f, e, k)
            .map_err(|source| SolveError::Element { element: e, source })?;
        let local = el.interpolate(u);
        for (&g, v) in dofs.element_dofs(e).iter().zip(local.iter()) {
            out[g] = *v;
        }
    }
    Ok(out)
}
