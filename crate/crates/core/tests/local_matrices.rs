//! Invariants of the local matrices on randomly generated polygons.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use polyvem::geometry::{Facet, Point2};
use polyvem::localmat::{
    compute_b, compute_d, compute_g, gbd_error, pi_nabla, pi_nabla_star, stiffness, VemElement,
};
use proptest::prelude::*;

/// Star-shaped polygon: sorted angles, radii in `[r_min, 1]`, then scaled and
/// moved.
fn star_polygon(max_vertices: usize, r_min: f64) -> impl Strategy<Value = Facet> {
    (3..=max_vertices)
        .prop_flat_map(move |n| {
            (
                proptest::collection::vec((-0.3f64..0.3, r_min..=1.0), n),
                0.0..2.0 * PI,
                -2.0f64..2.0,
                (-5.0f64..5.0, -5.0f64..5.0),
            )
        })
        .prop_map(|(jitter, offset, log_scale, (cx, cy))| {
            let n = jitter.len();
            let scale = 10f64.powf(log_scale);
            let step = 2.0 * PI / n as f64;
            let pts: Vec<Point2> = jitter
                .iter()
                .enumerate()
                .map(|(i, &(j, r))| {
                    let a = offset + step * (i as f64 + j);
                    Point2::new(scale * (cx + r * a.cos()), scale * (cy + r * a.sin()))
                })
                .collect();
            Facet::polygon(&pts).unwrap()
        })
}

struct Matrices {
    gbd: f64,
    pns_d: DMatrix<f64>,
    pn: DMatrix<f64>,
    k: DMatrix<f64>,
}

fn matrices(f: &Facet, degree: usize) -> Matrices {
    let el = VemElement::new(f, 0, degree).unwrap();
    let d = compute_d(&el).unwrap();
    let g = compute_g(&el).unwrap();
    let b = compute_b(&el).unwrap();
    let pns = pi_nabla_star(&el, &g, &b).unwrap();
    let pn = pi_nabla(&d, &pns);
    Matrices {
        gbd: gbd_error(&el, &g, &b, &d),
        pns_d: &pns * &d,
        k: stiffness(&g, &pns, &pn),
        pn,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gbd_identity_holds(f in star_polygon(9, 0.35), degree in 1usize..=3) {
        let m = matrices(&f, degree);
        prop_assert!(m.gbd <= 1e-12, "{}", m.gbd);
    }

    #[test]
    fn projector_reproduces_polynomials(f in star_polygon(9, 0.35), degree in 1usize..=3) {
        let m = matrices(&f, degree);
        let n = m.pns_d.nrows();
        prop_assert!((&m.pns_d - DMatrix::identity(n, n)).amax() <= 1e-11);
        prop_assert!((&m.pn * &m.pn - &m.pn).amax() <= 1e-11 * m.pn.amax());
    }

    #[test]
    fn stiffness_kernel_is_the_constants(f in star_polygon(9, 0.35), degree in 1usize..=3) {
        let el = VemElement::new(&f, 0, degree).unwrap();
        let k = matrices(&f, degree).k;
        prop_assert!((&k - k.transpose()).amax() == 0.0);
        let one = el.interpolate(|_| 1.0);
        prop_assert!((&k * one).amax() <= 1e-12 * k.amax());
        let eig = k.clone().symmetric_eigen().eigenvalues;
        let mut sorted: Vec<f64> = eig.iter().copied().collect();
        sorted.sort_by(f64::total_cmp);
        let top = sorted[sorted.len() - 1];
        prop_assert!(sorted[0] >= -1e-12 * top);
        prop_assert!(sorted[1] > 1e-10 * top, "second eigenvalue {:e}", sorted[1]);
    }

    #[test]
    fn stiffness_is_translation_invariant(f in star_polygon(7, 0.5), degree in 1usize..=3, dx in -3.0f64..3.0, dy in -3.0f64..3.0) {
        let moved = f.translated(Point2::new(dx * f.diameter(), dy * f.diameter()));
        let a = matrices(&f, degree).k;
        let b = matrices(&moved, degree).k;
        prop_assert!((&a - &b).amax() <= 1e-10 * a.amax());
    }
}
