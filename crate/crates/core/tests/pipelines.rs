//! End-to-end pipelines: generate, write, read, cut, merge, solve.

use polyvem::geometry::Point2;
use polyvem::mesh::{
    cut_mesh, generate, merge_meshes, parse_poly2d, to_poly2d, CutLine, MeshKind, PolyMesh,
    DEFAULT_MERGE_TOL,
};
use polyvem::monomials::Frame;
use polyvem::problem::{Polynomial, Problem};
use polyvem::quadrature::{compress_rule, compressed_size_bound, exactness_error, polygon_rule};
use polyvem::study::solve_problem;
use proptest::prelude::*;

fn shifted(mesh: &PolyMesh, dx: f64, dy: f64) -> PolyMesh {
    let v = mesh
        .vertices()
        .iter()
        .map(|p| Point2::new(p.x + dx, p.y + dy))
        .collect();
    PolyMesh::from_loops(v, &mesh.element_loops()).unwrap()
}

#[test]
fn text_round_trip_preserves_solution() {
    let mesh = cut_mesh(
        &generate(MeshKind::DistortedQuads, 5).unwrap(),
        &CutLine::new(1.0, -0.4, 0.3).unwrap(),
    )
    .unwrap();
    let back = parse_poly2d(&to_poly2d(&mesh)).unwrap();
    assert_eq!(back, mesh);
    let a = solve_problem(&mesh, 2, &Problem::SinSin, 1e-12).unwrap();
    let b = solve_problem(&back, 2, &Problem::SinSin, 1e-12).unwrap();
    assert_eq!(a.solution, b.solution);
}

#[test]
fn cut_then_merge_then_solve() {
    let left = cut_mesh(
        &generate(MeshKind::Triangles, 3).unwrap(),
        &CutLine::new(0.2, 1.0, 0.55).unwrap(),
    )
    .unwrap();
    let right = shifted(&generate(MeshKind::Quads, 4).unwrap(), 1.0, 0.0);
    let top = shifted(&generate(MeshKind::DistortedQuads, 4).unwrap(), 0.5, 1.0);
    let merged = merge_meshes(
        &merge_meshes(&left, &right, DEFAULT_MERGE_TOL).unwrap(),
        &top,
        DEFAULT_MERGE_TOL,
    )
    .unwrap();
    assert!((merged.total_area() - 3.0).abs() < 1e-12);
    assert!(merged.hanging_corners() > 0);
    for k in 1..=3 {
        let mut terms = Polynomial::full(k).terms;
        for (i, t) in terms.iter_mut().enumerate() {
            t.2 = 0.5 + 0.3 * i as f64;
        }
        let out = solve_problem(
            &merged,
            k,
            &Problem::Polynomial(Polynomial { terms }),
            1e-13,
        )
        .unwrap();
        assert!(
            out.errors.l2 < 1e-9 && out.errors.h1_semi < 1e-8,
            "k={k}: {:?}",
            out.errors
        );
    }
}

#[test]
fn successive_cuts_conserve_area() {
    let mut mesh = generate(MeshKind::Quads, 6).unwrap();
    for i in 0..6 {
        let t = 0.37 + 0.5 * i as f64;
        mesh = cut_mesh(
            &mesh,
            &CutLine::new(t.cos(), t.sin(), 0.2 + 0.1 * i as f64).unwrap(),
        )
        .unwrap();
        assert!((mesh.total_area() - 1.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn any_line_conserves_area(angle in 0.0f64..std::f64::consts::PI, offset in -0.2f64..1.2, n in 1usize..6) {
        let mesh = generate(MeshKind::DistortedQuads, n).unwrap();
        let line = CutLine::new(angle.cos(), angle.sin(), offset).unwrap();
        let cut = cut_mesh(&mesh, &line).unwrap();
        prop_assert!((cut.total_area() - mesh.total_area()).abs() <= 1e-12);
        prop_assert!(cut.num_elements() >= mesh.num_elements());
    }

    #[test]
    fn compressed_rules_stay_exact(n in 1usize..4, degree in 0usize..=7) {
        let mesh = generate(MeshKind::DistortedQuads, n).unwrap();
        for f in mesh.elements() {
            let frame = Frame::of_facet(f);
            let c = compress_rule(&polygon_rule(f, degree).unwrap(), &frame);
            prop_assert!(!c.failed);
            prop_assert!(c.rule.len() <= compressed_size_bound(degree));
            prop_assert!(c.rule.weights.iter().all(|&w| w >= 0.0));
            prop_assert!(exactness_error(&c.rule, f, &frame, degree) <= 1e-12);
        }
    }
}
