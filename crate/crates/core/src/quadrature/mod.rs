//! Quadrature rules on edges, polygons and planar faces in 3D, plus
//! exactness-preserving compression.

pub mod compress;
pub mod exact;
pub mod gauss;
pub mod triangle;

use nalgebra::DMatrix;

use crate::error::QuadratureError;
use crate::geometry::{EdgeRef, Facet, PlanarFace, Point2, Point3};
use crate::monomials::{dim_p, Frame, MonomialBasis};

pub use gauss::{gauss_legendre_unit, gauss_lobatto_unit};

/// Construction routine a rule came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureKind {
    GaussEdge,
    GaussLobattoEdge,
    TriangulatedPolygon,
    CompressedPolygon,
    PlanarFace,
    /// Tensor Gauss rule on an axis-aligned box.
    TensorBox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<P> {
    pub points: Vec<P>,
    pub weights: Vec<f64>,
    /// Polynomial degree integrated exactly.
    pub degree: usize,
    pub kind: QuadratureKind,
}

impl<P: Copy> QuadratureRule<P> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of the weights, i.e. the measure of the domain.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, mut f: impl FnMut(P) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (P, f64)> + '_ {
        self.points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }
}

pub type Rule2 = QuadratureRule<Point2>;
pub type Rule3 = QuadratureRule<Point3>;

/// Gauss-Legendre rule with `n` points on a physical edge.
pub fn gauss_edge(e: &EdgeRef, n: usize) -> Result<Rule2, QuadratureError> {
    if n == 0 {
        return Err(QuadratureError::InvalidRequest(
            "Gauss rule needs n >= 1".into(),
        ));
    }
    let (t, w) = gauss_legendre_unit(n);
    Ok(map_edge(e, &t, &w, 2 * n - 1, QuadratureKind::GaussEdge))
}

/// Gauss-Lobatto rule with `k + 1` nodes (endpoints included) on a physical
/// edge, ordered from `e.start` to `e.end`.
pub fn gauss_lobatto_edge(e: &EdgeRef, k: usize) -> Result<Rule2, QuadratureError> {
    if k == 0 {
        return Err(QuadratureError::InvalidRequest(
            "Gauss-Lobatto rule needs k >= 1".into(),
        ));
    }
    let (t, w) = gauss_lobatto_unit(k + 1);
    Ok(map_edge(
        e,
        &t,
        &w,
        2 * k - 1,
        QuadratureKind::GaussLobattoEdge,
    ))
}

fn map_edge(e: &EdgeRef, t: &[f64], w: &[f64], degree: usize, kind: QuadratureKind) -> Rule2 {
    Rule2 {
        points: t.iter().map(|&t| e.point_at(t)).collect(),
        weights: w.iter().map(|&w| w * e.length).collect(),
        degree,
        kind,
    }
}

/// Rule over `E \ holes` from the triangulation of the facet.
pub fn polygon_rule(f: &Facet, degree: usize) -> Result<Rule2, QuadratureError> {
    let tris = f.triangulate()?;
    let base = triangle::triangle_rule(degree);
    let mut points = Vec::with_capacity(tris.len() * base.len());
    let mut weights = Vec::with_capacity(tris.len() * base.len());
    for t in &tris {
        let area = 0.5 * (t[1] - t[0]).cross(t[2] - t[0]);
        for (l, w) in &base {
            points.push(Point2::new(
                l[0] * t[0].x + l[1] * t[1].x + l[2] * t[2].x,
                l[0] * t[0].y + l[1] * t[1].y + l[2] * t[2].y,
            ));
            weights.push(w * area);
        }
    }
    Ok(Rule2 {
        points,
        weights,
        degree,
        kind: QuadratureKind::TriangulatedPolygon,
    })
}

/// Rule on a planar face in 3D, mapped from the face's in-plane polygon rule.
pub fn planar_face_rule(face: &PlanarFace, degree: usize) -> Result<Rule3, QuadratureError> {
    let r2 = polygon_rule(face.facet(), degree)?;
    Ok(Rule3 {
        points: r2.points.iter().map(|&p| face.lift(p)).collect(),
        weights: r2.weights,
        degree,
        kind: QuadratureKind::PlanarFace,
    })
}

/// Tensor Gauss-Legendre rule on an axis-aligned box split into
/// `divisions[0] x divisions[1] x divisions[2]` sub-boxes with `n` points per
/// axis in each.
pub fn box_rule(min: Point3, max: Point3, divisions: [usize; 3], n: usize) -> Rule3 {
    let (t, w) = gauss_legendre_unit(n);
    let axis = |lo: f64, hi: f64, parts: usize| {
        let h = (hi - lo) / parts as f64;
        let mut pts = Vec::with_capacity(parts * n);
        for p in 0..parts {
            for (ti, wi) in t.iter().zip(&w) {
                pts.push((lo + h * (p as f64 + ti), h * wi));
            }
        }
        pts
    };
    let ax = axis(min.x, max.x, divisions[0]);
    let ay = axis(min.y, max.y, divisions[1]);
    let az = axis(min.z, max.z, divisions[2]);
    let mut points = Vec::with_capacity(ax.len() * ay.len() * az.len());
    let mut weights = Vec::with_capacity(points.capacity());
    for &(x, wx) in &ax {
        for &(y, wy) in &ay {
            for &(z, wz) in &az {
                points.push(Point3::new(x, y, z));
                weights.push(wx * wy * wz);
            }
        }
    }
    Rule3 {
        points,
        weights,
        degree: 2 * n - 1,
        kind: QuadratureKind::TensorBox,
    }
}

/// A compressed rule, or the original one with the failing residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Compression<P> {
    pub rule: QuadratureRule<P>,
    pub relative_residual: f64,
    pub failed: bool,
}

impl<P> Compression<P> {
    pub fn into_result(self) -> Result<QuadratureRule<P>, QuadratureError> {
        if self.failed {
            Err(QuadratureError::CompressionFailure {
                residual: self.relative_residual,
            })
        } else {
            Ok(self.rule)
        }
    }
}

/// Residual above which a compression is reported as failed.
pub const COMPRESSION_TOLERANCE: f64 = 1e-10;

fn finish<P: Copy>(
    rule: &QuadratureRule<P>,
    values: DMatrix<f64>,
    kind: QuadratureKind,
) -> Compression<P> {
    let sel = compress::compress_weights(&values, &rule.weights);
    if sel.relative_residual > COMPRESSION_TOLERANCE || sel.indices.is_empty() {
        return Compression {
            rule: rule.clone(),
            relative_residual: sel.relative_residual,
            failed: true,
        };
    }
    Compression {
        rule: QuadratureRule {
            points: sel.indices.iter().map(|&i| rule.points[i]).collect(),
            weights: sel.weights,
            degree: rule.degree,
            kind,
        },
        relative_residual: sel.relative_residual,
        failed: false,
    }
}

/// Compresses a 2D rule using the scaled monomials of `frame` as moments.
pub fn compress_rule(rule: &Rule2, frame: &Frame) -> Compression<Point2> {
    let basis = MonomialBasis::new(rule.degree);
    let mut values = DMatrix::zeros(basis.len(), rule.len());
    for (j, &p) in rule.points.iter().enumerate() {
        for (i, v) in basis.eval_all(p, frame).into_iter().enumerate() {
            values[(i, j)] = v;
        }
    }
    finish(rule, values, QuadratureKind::CompressedPolygon)
}

/// Exponent triples of the 3D monomials of degree `<= degree`, graded.
pub fn monomials_3d(degree: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for d in 0..=degree {
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                out.push([a, b, d - a - b]);
            }
        }
    }
    out
}

pub fn dim_p3(degree: usize) -> usize {
    (degree + 1) * (degree + 2) * (degree + 3) / 6
}

/// Compresses a 3D rule using monomials scaled by `(center, scale)`.
pub fn compress_rule_3d(rule: &Rule3, center: Point3, scale: f64) -> Compression<Point3> {
    let exps = monomials_3d(rule.degree);
    let mut values = DMatrix::zeros(exps.len(), rule.len());
    for (j, p) in rule.points.iter().enumerate() {
        let q = (*p - center) * (1.0 / scale);
        for (i, e) in exps.iter().enumerate() {
            values[(i, j)] = q.x.powi(e[0] as i32) * q.y.powi(e[1] as i32) * q.z.powi(e[2] as i32);
        }
    }
    finish(rule, values, rule.kind)
}

/// Domains accepted by [`build_rule`].
#[derive(Debug, Clone, Copy)]
pub enum QuadratureDomain<'a> {
    Edge(&'a EdgeRef),
    Polygon(&'a Facet),
    Face(&'a PlanarFace),
}

/// A rule from the registry, in the dimension of its domain.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltRule {
    Planar(Rule2),
    Spatial(Rule3),
}

/// Registry entry point: one construction routine per [`QuadratureKind`],
/// each asked for exactness `degree`.
pub fn build_rule(
    kind: QuadratureKind,
    domain: QuadratureDomain<'_>,
    degree: usize,
) -> Result<BuiltRule, QuadratureError> {
    let mismatch =
        || QuadratureError::InvalidRequest(format!("{kind:?} is not defined on this domain"));
    match (kind, domain) {
        (QuadratureKind::GaussEdge, QuadratureDomain::Edge(e)) => {
            Ok(BuiltRule::Planar(gauss_edge(e, degree / 2 + 1)?))
        }
        (QuadratureKind::GaussLobattoEdge, QuadratureDomain::Edge(e)) => Ok(BuiltRule::Planar(
            gauss_lobatto_edge(e, (degree + 1).div_ceil(2).max(1))?,
        )),
        (QuadratureKind::TriangulatedPolygon, QuadratureDomain::Polygon(f)) => {
            Ok(BuiltRule::Planar(polygon_rule(f, degree)?))
        }
        (QuadratureKind::CompressedPolygon, QuadratureDomain::Polygon(f)) => {
            let base = polygon_rule(f, degree)?;
            Ok(BuiltRule::Planar(
                compress_rule(&base, &Frame::of_facet(f)).into_result()?,
            ))
        }
        (QuadratureKind::PlanarFace, QuadratureDomain::Face(face)) => {
            Ok(BuiltRule::Spatial(planar_face_rule(face, degree)?))
        }
        _ => Err(mismatch()),
    }
}

/// Largest relative error of `rule` over the scaled monomials of degree
/// `<= degree`, measured against the closed-form integrals and normalized by
/// the facet area.
pub fn exactness_error(rule: &Rule2, facet: &Facet, frame: &Frame, degree: usize) -> f64 {
    let basis = MonomialBasis::new(degree);
    let exact = exact::basis_integrals(facet, frame, degree);
    let mut q = vec![0.0; basis.len()];
    for (p, w) in rule.iter() {
        for (qi, v) in q.iter_mut().zip(basis.eval_all(p, frame)) {
            *qi += w * v;
        }
    }
    q.iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).abs() / facet.area())
        .fold(0.0, f64::max)
}

/// Upper bound on the size of a compressed 2D rule of degree `d`.
pub fn compressed_size_bound(d: usize) -> usize {
    dim_p(d as isize)
}
