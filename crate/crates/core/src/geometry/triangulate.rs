//! Ear clipping for polygons with holes.
//!
//! Each hole is first bridged to the outer ring by a visible diagonal, which
//! turns the facet into a single weakly simple ring. Ears are then clipped in
//! ring order starting from the lowest position.

use super::{segments_intersect, Facet, Point2};
use crate::error::GeometryError;

pub type Triangle = [Point2; 3];

const CONVEX_EPS: f64 = 1e-12;

pub fn triangulate_facet(facet: &Facet) -> Result<Vec<Triangle>, GeometryError> {
    let mut ring: Vec<Point2> = facet.outer().points().to_vec();

    let mut order: Vec<usize> = (0..facet.holes().len()).collect();
    let max_x = |h: usize| {
        facet.holes()[h]
            .points()
            .iter()
            .map(|p| p.x)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    order.sort_by(|&a, &b| max_x(b).total_cmp(&max_x(a)).then(a.cmp(&b)));

    for (pos, &h) in order.iter().enumerate() {
        let hole = facet.holes()[h].points();
        let pending: Vec<&[Point2]> = order[pos + 1..]
            .iter()
            .map(|&o| facet.holes()[o].points())
            .collect();
        ring = bridge_hole(&ring, hole, &pending)?;
    }

    let tris = clip_ears(ring)?;

    let total: f64 = tris.iter().map(tri_area).sum();
    if (total - facet.area()).abs() > 1e-10 * facet.area() {
        return Err(GeometryError::TriangulationFailure(format!(
            "triangle areas sum to {total} but the facet area is {}",
            facet.area()
        )));
    }
    Ok(tris)
}

pub(crate) fn tri_area(t: &Triangle) -> f64 {
    0.5 * (t[1] - t[0]).cross(t[2] - t[0])
}

/// Direction `d` from vertex `b` lies strictly inside the interior angle at `b`
/// of the ring `a -> b -> c` (interior on the left).
fn in_cone(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let u = a - b;
    let w = c - b;
    if (b - a).cross(c - b) > 0.0 {
        w.cross(d) > 0.0 && d.cross(u) > 0.0
    } else {
        !(u.cross(d) >= 0.0 && d.cross(w) >= 0.0)
    }
}

fn bridge_hole(
    ring: &[Point2],
    hole: &[Point2],
    pending: &[&[Point2]],
) -> Result<Vec<Point2>, GeometryError> {
    let nh = hole.len();
    let m_idx = (0..nh)
        .max_by(|&a, &b| hole[a].x.total_cmp(&hole[b].x).then(b.cmp(&a)))
        .expect("hole has vertices");
    let m = hole[m_idx];
    let hp = hole[(m_idx + nh - 1) % nh];
    let hn = hole[(m_idx + 1) % nh];

    let n = ring.len();
    let mut candidates: Vec<usize> = (0..n).collect();
    candidates.sort_by(|&a, &b| {
        m.distance(ring[a])
            .total_cmp(&m.distance(ring[b]))
            .then(a.cmp(&b))
    });

    let blocked = |r: Point2, a: Point2, b: Point2| {
        if a == r || b == r || a == m || b == m {
            return false;
        }
        segments_intersect(m, r, a, b)
    };

    'cand: for &i in &candidates {
        let r = ring[i];
        if r == m {
            continue;
        }
        let a = ring[(i + n - 1) % n];
        let c = ring[(i + 1) % n];
        if !in_cone(a, r, c, m - r) || !in_cone(hp, m, hn, r - m) {
            continue;
        }
        for j in 0..n {
            if blocked(r, ring[j], ring[(j + 1) % n]) {
                continue 'cand;
            }
        }
        for loop_pts in std::iter::once(hole).chain(pending.iter().copied()) {
            let k = loop_pts.len();
            for j in 0..k {
                if blocked(r, loop_pts[j], loop_pts[(j + 1) % k]) {
                    continue 'cand;
                }
            }
        }
        let mut out = Vec::with_capacity(n + nh + 2);
        out.extend_from_slice(&ring[..=i]);
        for s in 0..nh {
            out.push(hole[(m_idx + s) % nh]);
        }
        out.push(m);
        out.push(r);
        out.extend_from_slice(&ring[i + 1..]);
        return Ok(out);
    }
    Err(GeometryError::TriangulationFailure(
        "no visible bridge from hole to outer loop".into(),
    ))
}

fn clip_ears(mut ring: Vec<Point2>) -> Result<Vec<Triangle>, GeometryError> {
    let mut tris = Vec::with_capacity(ring.len());
    while ring.len() > 3 {
        let n = ring.len();

        // Drop vertices that continue a straight run; they carry no area.
        if let Some(i) = (0..n).find(|&i| {
            let a = ring[(i + n - 1) % n];
            let b = ring[i];
            let c = ring[(i + 1) % n];
            let (e1, e2) = (b - a, c - b);
            a == b || (e1.cross(e2).abs() <= CONVEX_EPS * e1.norm() * e2.norm() && e1.dot(e2) > 0.0)
        }) {
            ring.remove(i);
            continue;
        }

        let ear = (0..n).find(|&i| is_ear(&ring, i));
        match ear {
            Some(i) => {
                tris.push([ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]]);
                ring.remove(i);
            }
            None => {
                return Err(GeometryError::TriangulationFailure(
                    "no ear found; the facet is likely self-intersecting".into(),
                ))
            }
        }
    }
    if ring.len() == 3 {
        let t = [ring[0], ring[1], ring[2]];
        let (e1, e2) = (t[1] - t[0], t[2] - t[1]);
        let c = e1.cross(e2);
        if c > CONVEX_EPS * e1.norm() * e2.norm() {
            tris.push(t);
        } else if c < 0.0 {
            return Err(GeometryError::TriangulationFailure(
                "final triangle is inverted".into(),
            ));
        }
    }
    Ok(tris)
}

fn is_ear(ring: &[Point2], i: usize) -> bool {
    let n = ring.len();
    let a = ring[(i + n - 1) % n];
    let b = ring[i];
    let c = ring[(i + 1) % n];
    let (e1, e2) = (b - a, c - b);
    let cross = e1.cross(e2);
    if cross <= CONVEX_EPS * e1.norm() * e2.norm() {
        return false;
    }
    let scale = cross.abs();
    for (j, &q) in ring.iter().enumerate() {
        if j == i || j == (i + n - 1) % n || j == (i + 1) % n {
            continue;
        }
        if q == a || q == b || q == c {
            continue;
        }
        let tol = -1e-14 * scale;
        if (b - a).cross(q - a) >= tol && (c - b).cross(q - b) >= tol && (a - c).cross(q - c) >= tol
        {
            return false;
        }
    }
    true
}
