//! Seeded element and mesh fixtures shared by the benchmarks and the
//! acceptance suite.

use std::f64::consts::PI;

use polyvem::geometry::{Facet, Point2};
use polyvem::mesh::PolyMesh;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementFamily {
    Convex,
    Concave,
    /// Convex with extra vertices in the middle of straight edges.
    Hanging,
    /// Convex with one polygonal hole.
    Holed,
}

impl ElementFamily {
    pub const ALL: [ElementFamily; 4] = [
        ElementFamily::Convex,
        ElementFamily::Concave,
        ElementFamily::Hanging,
        ElementFamily::Holed,
    ];
}

struct Placement {
    center: Point2,
    scale: f64,
    rotation: f64,
    axes: (f64, f64),
}

impl Placement {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        let scale = 10f64.powf(rng.random_range(-2.0..2.0));
        Self {
            center: Point2::new(
                rng.random_range(-3.0..3.0) * scale,
                rng.random_range(-3.0..3.0) * scale,
            ),
            scale,
            rotation: rng.random_range(0.0..2.0 * PI),
            axes: (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0)),
        }
    }

    fn place(&self, radius: f64, angle: f64) -> Point2 {
        let (x, y) = (
            radius * self.axes.0 * angle.cos(),
            radius * self.axes.1 * angle.sin(),
        );
        let (s, c) = self.rotation.sin_cos();
        Point2::new(
            self.center.x + self.scale * (c * x - s * y),
            self.center.y + self.scale * (s * x + c * y),
        )
    }
}

/// `n` increasing angles with a jittered uniform spacing.
fn angles(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let step = 2.0 * PI / n as f64;
    let offset = rng.random_range(0.0..step);
    (0..n)
        .map(|i| offset + step * (i as f64 + rng.random_range(-0.3..0.3)))
        .collect()
}

pub fn random_element(rng: &mut ChaCha8Rng, family: ElementFamily) -> Facet {
    let at = Placement::random(rng);
    match family {
        ElementFamily::Convex => {
            let n = rng.random_range(3..=8);
            let pts: Vec<Point2> = angles(rng, n)
                .into_iter()
                .map(|a| at.place(1.0, a))
                .collect();
            Facet::polygon(&pts).expect("convex fixture")
        }
        ElementFamily::Concave => {
            let n = 2 * rng.random_range(3..=5);
            let pts: Vec<Point2> = angles(rng, n)
                .into_iter()
                .enumerate()
                .map(|(i, a)| {
                    let r = if i % 2 == 0 {
                        1.0
                    } else {
                        rng.random_range(0.3..0.6)
                    };
                    at.place(r, a)
                })
                .collect();
            Facet::polygon(&pts).expect("concave fixture")
        }
        ElementFamily::Hanging => {
            let n = rng.random_range(3..=6);
            let corners: Vec<Point2> = angles(rng, n)
                .into_iter()
                .map(|a| at.place(1.0, a))
                .collect();
            let mut pts = Vec::new();
            let split = rng.random_range(0..n);
            for i in 0..n {
                let (p, q) = (corners[i], corners[(i + 1) % n]);
                pts.push(p);
                if i == split || rng.random_bool(0.3) {
                    pts.push(p.lerp(q, rng.random_range(0.3..0.7)));
                }
            }
            Facet::polygon(&pts).expect("hanging-node fixture")
        }
        ElementFamily::Holed => {
            let n = rng.random_range(5..=8);
            let outer: Vec<Point2> = angles(rng, n)
                .into_iter()
                .map(|a| at.place(1.0, a))
                .collect();
            let m = rng.random_range(3..=5);
            let r = rng.random_range(0.1..0.25);
            let hole: Vec<Point2> = angles(rng, m)
                .into_iter()
                .rev()
                .map(|a| at.place(r, a))
                .collect();
            Facet::with_holes(&outer, &[hole]).expect("holed fixture")
        }
    }
}

/// `per_family` elements of every family, reproducible from `seed`.
pub fn element_set(seed: u64, per_family: usize) -> Vec<(ElementFamily, Facet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(4 * per_family);
    for _ in 0..per_family {
        for family in ElementFamily::ALL {
            out.push((family, random_element(&mut rng, family)));
        }
    }
    out
}

/// Unit square split into a holed left half and a plain right half.
pub fn holed_square_mesh() -> PolyMesh {
    let p = Point2::new;
    PolyMesh::from_loops(
        vec![
            p(0.0, 0.0),
            p(0.5, 0.0),
            p(1.0, 0.0),
            p(1.0, 1.0),
            p(0.5, 1.0),
            p(0.0, 1.0),
            p(0.1, 0.2),
            p(0.35, 0.3),
            p(0.2, 0.7),
        ],
        &[
            vec![vec![0, 1, 4, 5], vec![6, 8, 7]],
            vec![vec![1, 2, 3, 4]],
        ],
    )
    .expect("holed fixture mesh")
}
