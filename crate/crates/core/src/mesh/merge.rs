//! Gluing two meshes along a common straight boundary.

use std::collections::HashSet;

use super::{bounding_diameter, PolyMesh};
use crate::error::MeshError;
use crate::geometry::{segment_distance, Facet, Point2};

/// Default coincidence tolerance, relative to the diameter of the union.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

struct Boundary {
    /// `(start, end)` vertex ids of each boundary edge, in element order.
    edges: Vec<(usize, usize)>,
    vertices: Vec<usize>,
}

fn boundary_of(mesh: &PolyMesh) -> Boundary {
    let mut edges = Vec::new();
    for f in mesh.elements() {
        for e in f.edges() {
            let id = mesh
                .edge_id(e.start_id, e.end_id)
                .expect("edge table is complete");
            if mesh.edges()[id].is_boundary() {
                edges.push((e.start_id, e.end_id));
            }
        }
    }
    let mut vertices: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    Boundary { edges, vertices }
}

fn interior_point(f: &Facet) -> Option<Point2> {
    let tris = f.triangulate().ok()?;
    let t = tris
        .iter()
        .max_by(|a, b| tri_area(a).total_cmp(&tri_area(b)))?;
    Some((t[0] + t[1] + t[2]) * (1.0 / 3.0))
}

fn tri_area(t: &[Point2; 3]) -> f64 {
    0.5 * (t[1] - t[0]).cross(t[2] - t[0]).abs()
}

fn bbox(f: &Facet) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in f.outer().points() {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

fn in_box(p: Point2, (lo, hi): (Point2, Point2)) -> bool {
    p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y
}

fn inside_any(p: Point2, mesh: &PolyMesh, boxes: &[(Point2, Point2)]) -> bool {
    mesh.elements()
        .iter()
        .zip(boxes)
        .any(|(f, &b)| in_box(p, b) && f.contains(p))
}

fn properly_cross(a: Point2, b: Point2, c: Point2, d: Point2, tol: f64) -> bool {
    let side = |p: Point2, q: Point2, r: Point2| {
        let len = (q - p).norm();
        (q - p).cross(r - p) / len
    };
    let (o1, o2) = (side(a, b, c), side(a, b, d));
    let (o3, o4) = (side(c, d, a), side(c, d, b));
    ((o1 > tol && o2 < -tol) || (o1 < -tol && o2 > tol))
        && ((o3 > tol && o4 < -tol) || (o3 < -tol && o4 > tol))
}

/// Length of the common part of two segments lying on one line within
/// `tol`, or zero.
fn collinear_overlap(a: Point2, b: Point2, c: Point2, d: Point2, tol: f64) -> f64 {
    let len = (b - a).norm();
    let t = (b - a) * (1.0 / len);
    let off = |p: Point2| t.cross(p - a).abs();
    if off(c) > tol || off(d) > tol {
        return 0.0;
    }
    let (s0, s1) = ((c - a).dot(t), (d - a).dot(t));
    (len.min(s0.max(s1)) - 0f64.max(s0.min(s1))).max(0.0)
}

/// Merges two meshes that touch along a straight boundary portion. Vertices
/// of `b` within `merge_tol` times the union diameter of a vertex of `a` are
/// identified with it, and boundary vertices of either mesh lying inside a
/// boundary edge of the other become hanging vertices of that edge.
pub fn merge_meshes(a: &PolyMesh, b: &PolyMesh, merge_tol: f64) -> Result<PolyMesh, MeshError> {
    let all: Vec<Point2> = a.vertices().iter().chain(b.vertices()).copied().collect();
    let tol = merge_tol * bounding_diameter(&all);

    // identify coincident vertices
    let mut by_x: Vec<usize> = (0..a.num_vertices()).collect();
    by_x.sort_by(|&i, &j| {
        a.vertices()[i]
            .x
            .total_cmp(&a.vertices()[j].x)
            .then(i.cmp(&j))
    });
    let xs: Vec<f64> = by_x.iter().map(|&i| a.vertices()[i].x).collect();
    let mut vertices = a.vertices().to_vec();
    let mut map_b = Vec::with_capacity(b.num_vertices());
    let mut shared = vec![false; b.num_vertices()];
    for (i, &p) in b.vertices().iter().enumerate() {
        let lo = xs.partition_point(|&x| x < p.x - tol);
        let hi = xs.partition_point(|&x| x <= p.x + tol);
        let hit = by_x[lo..hi]
            .iter()
            .copied()
            .filter(|&j| a.vertices()[j].distance(p) <= tol)
            .min_by(|&j, &k| {
                a.vertices()[j]
                    .distance(p)
                    .total_cmp(&a.vertices()[k].distance(p))
                    .then(j.cmp(&k))
            });
        match hit {
            Some(j) => {
                map_b.push(j);
                shared[i] = true;
            }
            None => {
                vertices.push(p);
                map_b.push(vertices.len() - 1);
            }
        }
    }

    // reject overlapping interiors
    let boxes_a: Vec<_> = a.elements().iter().map(bbox).collect();
    let boxes_b: Vec<_> = b.elements().iter().map(bbox).collect();
    let mut shared_a = vec![false; a.num_vertices()];
    for (i, s) in shared.iter().enumerate() {
        if *s {
            shared_a[map_b[i]] = true;
        }
    }
    for (i, &p) in b.vertices().iter().enumerate() {
        if !shared[i] && inside_any(p, a, &boxes_a) {
            return Err(MeshError::OverlapDetected);
        }
    }
    for (i, &p) in a.vertices().iter().enumerate() {
        if !shared_a[i] && inside_any(p, b, &boxes_b) {
            return Err(MeshError::OverlapDetected);
        }
    }
    for f in b.elements() {
        if interior_point(f).is_some_and(|p| inside_any(p, a, &boxes_a)) {
            return Err(MeshError::OverlapDetected);
        }
    }
    for f in a.elements() {
        if interior_point(f).is_some_and(|p| inside_any(p, b, &boxes_b)) {
            return Err(MeshError::OverlapDetected);
        }
    }
    let ba = boundary_of(a);
    let bb = boundary_of(b);
    let pa = |v: usize| a.vertices()[v];
    let pb = |v: usize| b.vertices()[v];
    let mut touching = false;
    for &(s, e) in &ba.edges {
        for &(t, f) in &bb.edges {
            if properly_cross(pa(s), pa(e), pb(t), pb(f), tol) {
                return Err(MeshError::OverlapDetected);
            }
            if !touching && collinear_overlap(pa(s), pa(e), pb(t), pb(f), tol) > tol {
                touching = true;
            }
        }
    }
    if !touching {
        return Err(MeshError::NoCommonBoundary);
    }

    // insert hanging vertices on boundary edges
    let candidates_for_a: Vec<usize> = bb.vertices.iter().map(|&v| map_b[v]).collect();
    let candidates_for_b: Vec<usize> = ba.vertices.clone();
    let refine =
        |loops: Vec<Vec<usize>>, boundary: &HashSet<(usize, usize)>, candidates: &[usize]| {
            loops
                .into_iter()
                .map(|l| {
                    let n = l.len();
                    let mut out = Vec::with_capacity(n);
                    for i in 0..n {
                        let (u, v) = (l[i], l[(i + 1) % n]);
                        out.push(u);
                        if !boundary.contains(&(u, v)) {
                            continue;
                        }
                        let (p, q) = (vertices[u], vertices[v]);
                        let len2 = (q - p).dot(q - p);
                        let mut inner: Vec<(f64, usize)> = candidates
                            .iter()
                            .copied()
                            .filter(|&w| w != u && w != v)
                            .filter_map(|w| {
                                let r = vertices[w];
                                let inside = segment_distance(r, p, q) <= tol
                                    && r.distance(p) > tol
                                    && r.distance(q) > tol;
                                inside.then(|| ((r - p).dot(q - p) / len2, w))
                            })
                            .collect();
                        inner.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
                        inner.dedup_by_key(|x| x.1);
                        out.extend(inner.into_iter().map(|x| x.1));
                    }
                    out
                })
                .collect::<Vec<_>>()
        };

    let boundary_a: HashSet<(usize, usize)> = ba.edges.iter().copied().collect();
    let boundary_b: HashSet<(usize, usize)> = bb
        .edges
        .iter()
        .map(|&(s, e)| (map_b[s], map_b[e]))
        .collect();
    let mut loops = Vec::with_capacity(a.num_elements() + b.num_elements());
    for l in a.element_loops() {
        loops.push(refine(l, &boundary_a, &candidates_for_a));
    }
    for l in b.element_loops() {
        let mapped = l
            .into_iter()
            .map(|ring| ring.into_iter().map(|v| map_b[v]).collect())
            .collect();
        loops.push(refine(mapped, &boundary_b, &candidates_for_b));
    }
    PolyMesh::from_loops(vertices, &loops)
}
