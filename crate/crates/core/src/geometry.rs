//! Points, oriented loops, polygons with holes and closed polyhedra.
//!
//! Loops follow the piecewise linear complex convention: the outer loop of a
//! facet runs counter-clockwise and every hole runs clockwise, so the domain
//! always lies to the left of the traversal direction and the right-hand
//! normal of each edge points outwards.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::GeometryError;
use crate::quadrature;

mod triangulate;

pub use triangulate::{triangulate_facet, Triangle};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Rejects NaN and infinite coordinates.
    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::NonFinite(0))
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn lerp(self, other: Self, t: f64) -> Self {
        Self::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        let p = Self { x, y, z };
        if p.is_finite() {
            Ok(p)
        } else {
            Err(GeometryError::NonFinite(0))
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Self) -> f64 {
        (self - o).norm()
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    fn of_signed_area(a: f64) -> Self {
        if a > 0.0 {
            Orientation::CounterClockwise
        } else {
            Orientation::Clockwise
        }
    }
}

/// Shoelace signed area: positive for counter-clockwise loops.
pub fn signed_area(points: &[Point2]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    // Shifting by the first vertex keeps the sum well conditioned far from the origin.
    let o = points[0];
    let mut twice = 0.0;
    for i in 1..n - 1 {
        twice += (points[i] - o).cross(points[i + 1] - o);
    }
    0.5 * twice
}

/// A closed sequence of vertices with a cached orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    ids: Vec<usize>,
    points: Vec<Point2>,
    orientation: Orientation,
    signed_area: f64,
}

impl Loop {
    /// Builds a loop and derives its orientation from the signed area.
    pub fn new(ids: Vec<usize>, points: Vec<Point2>) -> Result<Self, GeometryError> {
        if ids.len() != points.len() || ids.len() < 3 {
            return Err(GeometryError::TooFewVertices(ids.len().min(points.len())));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(GeometryError::NonFinite(ids[i]));
            }
        }
        let n = ids.len();
        for i in 0..n {
            let j = (i + 1) % n;
            if ids[i] == ids[j] || points[i] == points[j] {
                return Err(GeometryError::ZeroLengthEdge(ids[i], ids[j]));
            }
        }
        let signed_area = signed_area(&points);
        if signed_area == 0.0 || !signed_area.is_finite() {
            return Err(GeometryError::DegenerateLoop);
        }
        Ok(Self {
            ids,
            points,
            orientation: Orientation::of_signed_area(signed_area),
            signed_area,
        })
    }

    /// Builds a loop whose orientation is declared by the caller and fails if
    /// the signed area disagrees.
    pub fn declared(
        ids: Vec<usize>,
        points: Vec<Point2>,
        orientation: Orientation,
    ) -> Result<Self, GeometryError> {
        let l = Self::new(ids, points)?;
        if l.orientation != orientation {
            return Err(GeometryError::InvalidOrientation);
        }
        Ok(l)
    }

    /// Loop over `points` with ids `0..n`.
    pub fn from_points(points: Vec<Point2>) -> Result<Self, GeometryError> {
        Self::new((0..points.len()).collect(), points)
    }

    pub fn reversed(&self) -> Self {
        let mut ids = self.ids.clone();
        let mut points = self.points.clone();
        ids.reverse();
        points.reverse();
        Self {
            ids,
            points,
            orientation: match self.orientation {
                Orientation::CounterClockwise => Orientation::Clockwise,
                Orientation::Clockwise => Orientation::CounterClockwise,
            },
            signed_area: -self.signed_area,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn signed_area(&self) -> f64 {
        self.signed_area
    }

    /// Winding number of `p` with respect to this loop (0 outside).
    pub fn winding_number(&self, p: Point2) -> i32 {
        let mut wn = 0;
        let n = self.points.len();
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            let side = (b - a).cross(p - a);
            if a.y <= p.y {
                if b.y > p.y && side > 0.0 {
                    wn += 1;
                }
            } else if b.y <= p.y && side < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    /// Distance from `p` to the closest point of the loop polyline.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| segment_distance(p, self.points[i], self.points[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 > 0.0 {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    p.distance(a + ab * t)
}

/// Proper or touching intersection of the closed segments `[a, b]` and `[c, d]`.
pub(crate) fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2, o: f64| {
        o == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

/// Orientation corrections applied while building a facet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryWarning {
    ReversedOuter,
    ReversedHole(usize),
}

/// A polygon with zero or more holes.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    outer: Loop,
    holes: Vec<Loop>,
    area: f64,
    centroid: Point2,
    diameter: f64,
    perimeter: f64,
}

impl Facet {
    /// Builds a facet, reversing any loop with the wrong orientation.
    pub fn new(
        outer: Loop,
        holes: Vec<Loop>,
    ) -> Result<(Self, Vec<GeometryWarning>), GeometryError> {
        let mut warnings = Vec::new();
        let outer = if outer.orientation() == Orientation::Clockwise {
            warnings.push(GeometryWarning::ReversedOuter);
            outer.reversed()
        } else {
            outer
        };
        let holes = holes
            .into_iter()
            .enumerate()
            .map(|(i, h)| {
                if h.orientation() == Orientation::CounterClockwise {
                    warnings.push(GeometryWarning::ReversedHole(i));
                    h.reversed()
                } else {
                    h
                }
            })
            .collect();
        for w in &warnings {
            log::warn!("facet orientation corrected: {w:?}");
        }
        Ok((Self::build(outer, holes)?, warnings))
    }

    /// Builds a facet whose loops must already be correctly oriented.
    pub fn from_oriented(outer: Loop, holes: Vec<Loop>) -> Result<Self, GeometryError> {
        if outer.orientation() != Orientation::CounterClockwise
            || holes
                .iter()
                .any(|h| h.orientation() != Orientation::Clockwise)
        {
            return Err(GeometryError::InvalidOrientation);
        }
        Self::build(outer, holes)
    }

    /// Simple polygon from coordinates; ids are `0..n`.
    pub fn polygon(points: &[Point2]) -> Result<Self, GeometryError> {
        Ok(Self::new(Loop::from_points(points.to_vec())?, Vec::new())?.0)
    }

    /// Polygon with holes from coordinates; ids are numbered consecutively
    /// across the outer loop and then each hole.
    pub fn with_holes(outer: &[Point2], holes: &[Vec<Point2>]) -> Result<Self, GeometryError> {
        let mut next = outer.len();
        let outer_loop = Loop::from_points(outer.to_vec())?;
        let mut hole_loops = Vec::with_capacity(holes.len());
        for h in holes {
            let ids = (next..next + h.len()).collect();
            next += h.len();
            hole_loops.push(Loop::new(ids, h.clone())?);
        }
        Ok(Self::new(outer_loop, hole_loops)?.0)
    }

    /// Facet whose loops index into a shared vertex array.
    pub fn from_indexed(
        vertices: &[Point2],
        outer: &[usize],
        holes: &[Vec<usize>],
    ) -> Result<(Self, Vec<GeometryWarning>), GeometryError> {
        let fetch = |ids: &[usize]| -> Result<Loop, GeometryError> {
            let pts = ids
                .iter()
                .map(|&i| {
                    vertices
                        .get(i)
                        .copied()
                        .ok_or(GeometryError::IndexOutOfRange(i))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Loop::new(ids.to_vec(), pts)
        };
        let outer = fetch(outer)?;
        let holes = holes
            .iter()
            .map(|h| fetch(h))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(outer, holes)
    }

    fn build(outer: Loop, holes: Vec<Loop>) -> Result<Self, GeometryError> {
        let mut area = outer.signed_area();
        for h in &holes {
            area -= h.signed_area().abs();
        }
        if area <= 0.0 || !area.is_finite() {
            return Err(GeometryError::NonPositiveArea(area));
        }

        let all: Vec<Point2> = std::iter::once(&outer)
            .chain(holes.iter())
            .flat_map(|l| l.points().iter().copied())
            .collect();
        let mut diameter: f64 = 0.0;
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                diameter = diameter.max(all[i].distance(all[j]));
            }
        }
        let scale_tol = 1e-12 * diameter;

        for (hi, h) in holes.iter().enumerate() {
            let p = h.points()[0];
            if outer.winding_number(p) == 0 || outer.boundary_distance(p) <= scale_tol {
                return Err(GeometryError::HoleOutside(hi));
            }
            for (hj, other) in holes.iter().enumerate().skip(hi + 1) {
                if other.winding_number(p) != 0 || h.winding_number(other.points()[0]) != 0 {
                    return Err(GeometryError::HolesOverlap(hi, hj));
                }
            }
        }

        // First moments relative to the first outer vertex.
        let o = outer.points()[0];
        let (mut mx, mut my) = (0.0, 0.0);
        let mut perimeter = 0.0;
        for l in std::iter::once(&outer).chain(holes.iter()) {
            let pts = l.points();
            let n = pts.len();
            for i in 0..n {
                let a = pts[i] - o;
                let b = pts[(i + 1) % n] - o;
                let c = a.cross(b);
                mx += (a.x + b.x) * c;
                my += (a.y + b.y) * c;
                perimeter += a.distance(b);
            }
        }
        let centroid = Point2::new(o.x + mx / (6.0 * area), o.y + my / (6.0 * area));

        Ok(Self {
            outer,
            holes,
            area,
            centroid,
            diameter,
            perimeter,
        })
    }

    /// Checks that no two edges of any loops cross or touch except at shared
    /// endpoints of consecutive edges.
    pub fn validate_strict(&self) -> Result<(), GeometryError> {
        let segs: Vec<(Point2, Point2, usize, usize, usize)> = self
            .loops()
            .enumerate()
            .flat_map(|(li, l)| {
                let n = l.len();
                (0..n).map(move |i| (l.points()[i], l.points()[(i + 1) % n], li, i, n))
            })
            .collect();
        for (s, &(a, b, la, ia, na)) in segs.iter().enumerate() {
            for &(c, d, lb, ib, _) in segs.iter().skip(s + 1) {
                if la == lb && (ib == (ia + 1) % na || ia == (ib + 1) % na) {
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    return Err(GeometryError::SelfIntersecting);
                }
            }
        }
        Ok(())
    }

    pub fn outer(&self) -> &Loop {
        &self.outer
    }

    pub fn holes(&self) -> &[Loop] {
        &self.holes
    }

    /// Outer loop followed by the holes.
    pub fn loops(&self) -> impl Iterator<Item = &Loop> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn centroid(&self) -> Point2 {
        self.centroid
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Total length of all loops, holes included.
    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn num_vertices(&self) -> usize {
        self.loops().map(Loop::len).sum()
    }

    /// Vertex ids in boundary order: outer loop, then each hole.
    pub fn vertex_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.loops().flat_map(|l| l.ids().iter().copied())
    }

    pub fn vertex_points(&self) -> impl Iterator<Item = Point2> + '_ {
        self.loops().flat_map(|l| l.points().iter().copied())
    }

    /// All edges in boundary order; edge `i` starts at vertex `i` of
    /// [`Facet::vertex_ids`].
    pub fn edges(&self) -> Vec<EdgeRef> {
        let mut out = Vec::with_capacity(self.num_vertices());
        for (li, l) in self.loops().enumerate() {
            let n = l.len();
            for i in 0..n {
                let j = (i + 1) % n;
                out.push(EdgeRef::new(
                    l.ids()[i],
                    l.ids()[j],
                    l.points()[i],
                    l.points()[j],
                    li,
                ));
            }
        }
        out
    }

    /// Strict containment in the open domain (outer interior minus closed holes).
    pub fn contains(&self, p: Point2) -> bool {
        let tol = 1e-12 * self.diameter;
        if self.outer.winding_number(p) == 0 || self.outer.boundary_distance(p) <= tol {
            return false;
        }
        self.holes
            .iter()
            .all(|h| h.winding_number(p) == 0 && h.boundary_distance(p) > tol)
    }

    pub fn triangulate(&self) -> Result<Vec<Triangle>, GeometryError> {
        triangulate_facet(self)
    }

    pub fn translated(&self, d: Point2) -> Self {
        self.mapped(|p| p + d)
    }

    /// Applies an orientation-preserving affine-like map to every vertex.
    pub fn mapped(&self, f: impl Fn(Point2) -> Point2) -> Self {
        let map_loop = |l: &Loop| {
            Loop::new(l.ids().to_vec(), l.points().iter().map(|&p| f(p)).collect())
                .expect("mapping preserves loop validity")
        };
        let outer = map_loop(&self.outer);
        let holes = self.holes.iter().map(map_loop).collect();
        Self::new(outer, holes)
            .expect("mapping preserves facet validity")
            .0
    }
}

/// Oriented edge of a facet with its outward unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRef {
    pub start_id: usize,
    pub end_id: usize,
    pub start: Point2,
    pub end: Point2,
    pub length: f64,
    pub tangent: Point2,
    pub normal: Point2,
    /// Index of the loop (0 = outer) the edge belongs to.
    pub loop_index: usize,
}

impl EdgeRef {
    pub fn new(
        start_id: usize,
        end_id: usize,
        start: Point2,
        end: Point2,
        loop_index: usize,
    ) -> Self {
        let d = end - start;
        let length = d.norm();
        let tangent = d * (1.0 / length);
        Self {
            start_id,
            end_id,
            start,
            end,
            length,
            tangent,
            normal: Point2::new(tangent.y, -tangent.x),
            loop_index,
        }
    }

    /// Edge between two free points, normal on the right of `start -> end`.
    pub fn segment(start: Point2, end: Point2) -> Self {
        Self::new(0, 1, start, end, 0)
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        self.start.lerp(self.end, t)
    }

    pub fn midpoint(&self) -> Point2 {
        self.point_at(0.5)
    }
}

/// A planar face embedded in 3D with an in-plane orthonormal frame.
#[derive(Debug, Clone)]
pub struct PlanarFace {
    origin: Point3,
    u: Point3,
    v: Point3,
    normal: Point3,
    facet: Facet,
}

impl PlanarFace {
    /// Face bounded by `loops` (outer first, holes after). The outward normal
    /// follows the right-hand rule on the outer loop.
    pub fn new(loops: &[Vec<Point3>]) -> Result<Self, GeometryError> {
        let outer = loops.first().ok_or(GeometryError::TooFewVertices(0))?;
        if outer.len() < 3 {
            return Err(GeometryError::TooFewVertices(outer.len()));
        }
        // Newell's method
        let mut n = Point3::default();
        for i in 0..outer.len() {
            let a = outer[i];
            let b = outer[(i + 1) % outer.len()];
            n.x += (a.y - b.y) * (a.z + b.z);
            n.y += (a.z - b.z) * (a.x + b.x);
            n.z += (a.x - b.x) * (a.y + b.y);
        }
        let nn = n.norm();
        if nn == 0.0 || !nn.is_finite() {
            return Err(GeometryError::DegenerateLoop);
        }
        let normal = n * (1.0 / nn);
        let origin = outer[0];
        let (far, _) = outer
            .iter()
            .map(|&p| (p, p.distance(origin)))
            .fold((origin, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let d = far - origin;
        let d = d - normal * d.dot(normal);
        let u = d * (1.0 / d.norm());
        let v = normal.cross(u);

        let mut h: f64 = 0.0;
        for l in loops {
            for &a in l {
                for &b in l {
                    h = h.max(a.distance(b));
                }
            }
        }
        for l in loops {
            for &p in l {
                if (p - origin).dot(normal).abs() > 1e-10 * h {
                    return Err(GeometryError::NonPlanarFace(0));
                }
            }
        }

        let project = |p: Point3| {
            let d = p - origin;
            Point2::new(d.dot(u), d.dot(v))
        };
        let mut next = 0;
        let mut loops2 = Vec::with_capacity(loops.len());
        for l in loops {
            let ids = (next..next + l.len()).collect();
            next += l.len();
            loops2.push(Loop::new(ids, l.iter().map(|&p| project(p)).collect())?);
        }
        let outer2 = loops2.remove(0);
        let facet = Facet::from_oriented(outer2, loops2)?;
        Ok(Self {
            origin,
            u,
            v,
            normal,
            facet,
        })
    }

    pub fn normal(&self) -> Point3 {
        self.normal
    }

    /// The face in its own in-plane coordinates.
    pub fn facet(&self) -> &Facet {
        &self.facet
    }

    pub fn area(&self) -> f64 {
        self.facet.area()
    }

    pub fn lift(&self, p: Point2) -> Point3 {
        self.origin + self.u * p.x + self.v * p.y
    }
}

/// A closed polyhedral surface with outward oriented faces.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    vertices: Vec<Point3>,
    faces: Vec<Vec<Vec<usize>>>,
    planar: Vec<PlanarFace>,
    volume: f64,
    centroid: Point3,
    diameter: f64,
}

impl Polyhedron {
    /// `faces[f]` lists the loops of face `f` (outer first) as vertex ids.
    pub fn new(vertices: Vec<Point3>, faces: Vec<Vec<Vec<usize>>>) -> Result<Self, GeometryError> {
        for (i, p) in vertices.iter().enumerate() {
            if !p.is_finite() {
                return Err(GeometryError::NonFinite(i));
            }
        }
        let mut directed = std::collections::BTreeMap::<(usize, usize), usize>::new();
        for face in &faces {
            for l in face {
                for i in 0..l.len() {
                    let (a, b) = (l[i], l[(i + 1) % l.len()]);
                    if a >= vertices.len() || b >= vertices.len() {
                        return Err(GeometryError::IndexOutOfRange(a.max(b)));
                    }
                    *directed.entry((a, b)).or_default() += 1;
                }
            }
        }
        for (&(a, b), &count) in &directed {
            if count != 1 || directed.get(&(b, a)) != Some(&1) {
                return Err(GeometryError::OpenSurface(a, b));
            }
        }

        let mut planar = Vec::with_capacity(faces.len());
        for (fi, face) in faces.iter().enumerate() {
            let loops: Vec<Vec<Point3>> = face
                .iter()
                .map(|l| l.iter().map(|&i| vertices[i]).collect())
                .collect();
            planar.push(PlanarFace::new(&loops).map_err(|e| match e {
                GeometryError::NonPlanarFace(_) => GeometryError::NonPlanarFace(fi),
                other => other,
            })?);
        }

        let mut diameter: f64 = 0.0;
        for a in &vertices {
            for b in &vertices {
                diameter = diameter.max(a.distance(*b));
            }
        }

        // Divergence theorem with F = (x, 0, 0) for the volume and
        // F = (x^2/2, 0, 0) etc. for the first moments. Coordinates are shifted
        // to the first vertex for conditioning.
        let o = vertices.first().copied().unwrap_or_default();
        let (mut volume, mut mx, mut my, mut mz) = (0.0, 0.0, 0.0, 0.0);
        for face in &planar {
            let rule = quadrature::planar_face_rule(face, 2)
                .map_err(|_| GeometryError::TriangulationFailure("face rule".into()))?;
            let n = face.normal();
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                let d = *p - o;
                volume += w * n.x * d.x;
                mx += w * n.x * d.x * d.x * 0.5;
                my += w * n.y * d.y * d.y * 0.5;
                mz += w * n.z * d.z * d.z * 0.5;
            }
        }
        if volume <= 0.0 {
            return Err(GeometryError::InvalidOrientation);
        }
        let centroid = Point3::new(o.x + mx / volume, o.y + my / volume, o.z + mz / volume);
        Ok(Self {
            vertices,
            faces,
            planar,
            volume,
            centroid,
            diameter,
        })
    }

    /// Axis-aligned box `[min, max]` with outward oriented quadrilateral faces.
    pub fn axis_box(min: Point3, max: Point3) -> Result<Self, GeometryError> {
        let v = |i: usize| {
            Point3::new(
                if i & 1 == 0 { min.x } else { max.x },
                if i & 2 == 0 { min.y } else { max.y },
                if i & 4 == 0 { min.z } else { max.z },
            )
        };
        let vertices = (0..8).map(v).collect();
        let faces = vec![
            vec![vec![0, 2, 3, 1]],
            vec![vec![4, 5, 7, 6]],
            vec![vec![0, 1, 5, 4]],
            vec![vec![2, 6, 7, 3]],
            vec![vec![0, 4, 6, 2]],
            vec![vec![1, 3, 7, 5]],
        ];
        Self::new(vertices, faces)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    pub fn planar_faces(&self) -> &[PlanarFace] {
        &self.planar
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn centroid(&self) -> Point3 {
        self.centroid
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<Point2> {
        vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ]
    }

    fn centered_hole() -> Vec<Point2> {
        vec![
            Point2::new(0.25, 0.25),
            Point2::new(0.25, 0.75),
            Point2::new(0.75, 0.75),
            Point2::new(0.75, 0.25),
        ]
    }

    #[test]
    fn unit_square_measures() {
        let f = Facet::polygon(&unit_square()).unwrap();
        assert_eq!(f.area(), 1.0);
        assert!((f.diameter() - 2f64.sqrt()).abs() < 1e-15);
        assert!((f.centroid().x - 0.5).abs() < 1e-15);
        assert!((f.centroid().y - 0.5).abs() < 1e-15);
        assert_eq!(f.perimeter(), 4.0);
    }

    #[test]
    fn square_with_hole() {
        let f = Facet::with_holes(&unit_square(), &[centered_hole()]).unwrap();
        assert!((f.area() - 0.75).abs() < 1e-15);
        assert!((f.centroid().x - 0.5).abs() < 1e-15);
        assert!((f.centroid().y - 0.5).abs() < 1e-15);
        assert!(!f.contains(Point2::new(0.5, 0.5)));
        assert!(f.contains(Point2::new(0.1, 0.5)));
    }

    #[test]
    fn l_shape_area() {
        let pts = [(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)]
            .map(|(x, y)| Point2::new(x, y));
        let f = Facet::polygon(&pts).unwrap();
        assert_eq!(f.area(), 3.0);
        // pixel-count oracle
        let n = 400;
        let mut inside = 0;
        for i in 0..n {
            for j in 0..n {
                let p = Point2::new(
                    2.0 * (i as f64 + 0.5) / n as f64,
                    2.0 * (j as f64 + 0.5) / n as f64,
                );
                if f.contains(p) {
                    inside += 1;
                }
            }
        }
        let est = 4.0 * inside as f64 / (n * n) as f64;
        assert!((est - 3.0).abs() < 1e-2);
    }

    #[test]
    fn triangle_centroid() {
        let f = Facet::polygon(&[
            Point2::new(0., 0.),
            Point2::new(1., 0.),
            Point2::new(0., 1.),
        ])
        .unwrap();
        assert!((f.diameter() - 2f64.sqrt()).abs() < 1e-15);
        assert!((f.centroid().x - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.centroid().y - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn clockwise_outer_is_corrected() {
        let mut pts = unit_square();
        pts.reverse();
        let (f, w) = Facet::new(Loop::from_points(pts).unwrap(), vec![]).unwrap();
        assert_eq!(w, vec![GeometryWarning::ReversedOuter]);
        assert_eq!(f.outer().orientation(), Orientation::CounterClockwise);
        assert_eq!(f.area(), 1.0);
    }

    #[test]
    fn strict_orientation_is_rejected() {
        let mut pts = unit_square();
        pts.reverse();
        let outer = Loop::from_points(pts.clone()).unwrap();
        assert_eq!(
            Facet::from_oriented(outer, vec![]).unwrap_err(),
            GeometryError::InvalidOrientation
        );
        let ids = (0..4).collect();
        assert_eq!(
            Loop::declared(ids, pts, Orientation::CounterClockwise).unwrap_err(),
            GeometryError::InvalidOrientation
        );
    }

    #[test]
    fn degenerate_inputs() {
        let pts = vec![
            Point2::new(0., 0.),
            Point2::new(0., 0.),
            Point2::new(1., 1.),
        ];
        assert!(matches!(
            Loop::from_points(pts),
            Err(GeometryError::ZeroLengthEdge(..))
        ));
        let collinear = vec![
            Point2::new(0., 0.),
            Point2::new(1., 0.),
            Point2::new(2., 0.),
        ];
        assert_eq!(
            Loop::from_points(collinear).unwrap_err(),
            GeometryError::DegenerateLoop
        );
        assert!(Point2::try_new(f64::NAN, 0.0).is_err());
        // collinear run (hanging node) is fine
        let hanging = vec![
            Point2::new(0., 0.),
            Point2::new(0.5, 0.),
            Point2::new(1., 0.),
            Point2::new(1., 1.),
            Point2::new(0., 1.),
        ];
        assert_eq!(Facet::polygon(&hanging).unwrap().area(), 1.0);
    }

    #[test]
    fn hole_outside_is_rejected() {
        let hole: Vec<Point2> = centered_hole()
            .iter()
            .map(|&p| p + Point2::new(2.0, 0.0))
            .collect();
        assert_eq!(
            Facet::with_holes(&unit_square(), &[hole]).unwrap_err(),
            GeometryError::HoleOutside(0)
        );
    }

    #[test]
    fn strict_validation_detects_bowtie_crossing() {
        // Outer loop with a hole that pokes through an outer edge.
        let hole = vec![
            Point2::new(0.5, 0.5),
            Point2::new(0.5, 0.7),
            Point2::new(1.2, 0.7),
            Point2::new(1.2, 0.5),
        ];
        let f = Facet::with_holes(&unit_square(), &[hole]).unwrap();
        assert_eq!(f.validate_strict(), Err(GeometryError::SelfIntersecting));
        let ok = Facet::with_holes(&unit_square(), &[centered_hole()]).unwrap();
        assert!(ok.validate_strict().is_ok());
    }

    #[test]
    fn outward_normals() {
        let f = Facet::with_holes(&unit_square(), &[centered_hole()]).unwrap();
        for e in f.edges() {
            assert!(e.normal.dot(e.tangent).abs() < 1e-15);
            let out = e.midpoint() + e.normal * 1e-6;
            let inn = e.midpoint() - e.normal * 1e-6;
            assert!(!f.contains(out));
            assert!(f.contains(inn));
        }
    }

    #[test]
    fn polyhedra_volumes() {
        let cube = Polyhedron::axis_box(Point3::new(0., 0., 0.), Point3::new(1., 1., 1.)).unwrap();
        assert!((cube.volume() - 1.0).abs() < 1e-14);
        let c = cube.centroid();
        assert!(
            (c.x - 0.5).abs() < 1e-14 && (c.y - 0.5).abs() < 1e-14 && (c.z - 0.5).abs() < 1e-14
        );
        let moved =
            Polyhedron::axis_box(Point3::new(10., 10., 10.), Point3::new(11., 11., 11.)).unwrap();
        assert!((moved.volume() - 1.0).abs() < 1e-13);
        let b = Polyhedron::axis_box(Point3::new(0., 0., 0.), Point3::new(2., 3., 0.5)).unwrap();
        assert!((b.volume() - 3.0).abs() < 3e-13);

        let tet = Polyhedron::new(
            vec![
                Point3::new(0., 0., 0.),
                Point3::new(1., 0., 0.),
                Point3::new(0., 1., 0.),
                Point3::new(0., 0., 1.),
            ],
            vec![
                vec![vec![0, 2, 1]],
                vec![vec![0, 1, 3]],
                vec![vec![0, 3, 2]],
                vec![vec![1, 2, 3]],
            ],
        )
        .unwrap();
        assert!((tet.volume() - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn open_surface_is_rejected() {
        let res = Polyhedron::new(
            vec![
                Point3::new(0., 0., 0.),
                Point3::new(1., 0., 0.),
                Point3::new(0., 1., 0.),
                Point3::new(0., 0., 1.),
            ],
            vec![
                vec![vec![0, 2, 1]],
                vec![vec![0, 1, 3]],
                vec![vec![0, 3, 2]],
            ],
        );
        assert!(matches!(res, Err(GeometryError::OpenSurface(..))));
    }

    #[test]
    fn non_planar_face_is_rejected() {
        let res = PlanarFace::new(&[vec![
            Point3::new(0., 0., 0.),
            Point3::new(1., 0., 0.),
            Point3::new(1., 1., 0.1),
            Point3::new(0., 1., 0.),
        ]]);
        assert!(matches!(res, Err(GeometryError::NonPlanarFace(_))));
    }
}
