//! Acceptance suite. Every test checks one criterion at its stated tolerance
//! and prints a single PASS/FAIL line (written straight to stderr so it shows
//! up even when test output is captured).

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use polyvem::geometry::{Facet, Point2, Point3, Polyhedron};
use polyvem::localmat::{
    compute_b, compute_d, compute_g, gbd_error, pi_nabla, pi_nabla_star, DenseMatrix, VemElement,
};
use polyvem::mesh::{
    cut_mesh, cut_mesh_where, generate, merge_meshes, CutLine, MeshKind, PolyMesh,
    DEFAULT_MERGE_TOL,
};
use polyvem::monomials::Frame;
use polyvem::problem::{Polynomial, Problem};
use polyvem::quadrature::{
    box_rule, compress_rule, compress_rule_3d, compressed_size_bound, exactness_error,
    monomials_3d, polygon_rule, Rule3,
};
use polyvem::study::{convergence_study, StudyConfig};
use polyvem::system::{apply_dirichlet, assemble, interpolate, solve, DirichletData};
use polyvem_bench::{element_set, holed_square_mesh};

const SEED: u64 = 20_240_601;

fn report(criterion: u32, name: &str, pass: bool, detail: &str, elapsed: Duration) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr().lock(),
        "criterion {criterion} [{name}]: {verdict} ({detail}; {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// 100 elements: 25 convex, concave, hanging-node and holed.
fn elements() -> Vec<Facet> {
    element_set(SEED, 25).into_iter().map(|(_, f)| f).collect()
}

fn max_abs(m: &DenseMatrix) -> f64 {
    m.amax()
}

#[test]
fn criterion_1_gbd_identity() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for f in elements() {
        for k in 1..=3 {
            let el = VemElement::new(&f, 0, k).unwrap();
            let d = compute_d(&el).unwrap();
            let g = compute_g(&el).unwrap();
            let b = compute_b(&el).unwrap();
            worst = worst.max(gbd_error(&el, &g, &b, &d));
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-12 && elapsed < Duration::from_secs(10) && count >= 300;
    report(
        1,
        "G~ = B~ D",
        pass,
        &format!("{count} element/degree pairs, max relative error {worst:.3e}, limit 1e-12, 10 s"),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_2_projectors() {
    let start = Instant::now();
    let (mut inverse, mut idempotent): (f64, f64) = (0.0, 0.0);
    for f in elements() {
        for k in 1..=3 {
            let el = VemElement::new(&f, 0, k).unwrap();
            let d = compute_d(&el).unwrap();
            let g = compute_g(&el).unwrap();
            let b = compute_b(&el).unwrap();
            let pns = pi_nabla_star(&el, &g, &b).unwrap();
            let pn = pi_nabla(&d, &pns);
            let n = pns.nrows();
            inverse = inverse.max(max_abs(&(&pns * &d - DenseMatrix::identity(n, n))));
            idempotent = idempotent.max(max_abs(&(&pn * &pn - &pn)) / max_abs(&pn));
        }
    }
    let pass = inverse <= 1e-11 && idempotent <= 1e-11;
    report(
        2,
        "projectors",
        pass,
        &format!(
            "max |Π∇*D - I| {inverse:.3e}, max idempotency defect {idempotent:.3e}, limit 1e-11"
        ),
        start.elapsed(),
    );
    assert!(pass);
}

fn patch_polynomial(k: usize) -> Polynomial {
    let mut terms = Vec::new();
    for d in 0..=k as u32 {
        for j in 0..=d {
            terms.push((d - j, j, 1.0 + 0.25 * (d + j) as f64));
        }
    }
    Polynomial { terms }
}

/// Largest interior dof error of the discrete solution relative to the
/// largest dof of the interpolant.
fn patch_error(mesh: &PolyMesh, k: usize) -> f64 {
    let u = Problem::Polynomial(patch_polynomial(k));
    let f = |q: Point2| u.source(q);
    let g = |q: Point2| u.exact(q);
    let sys = assemble(mesh, k, &f).unwrap();
    let reduced = apply_dirichlet(&sys, DirichletData::new(mesh, &sys.dofs, &g));
    let (x, _) = solve(&reduced, 1e-14, None).unwrap();
    let exact = interpolate(mesh, &sys.dofs, &g).unwrap();
    let scale = exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    reduced
        .free
        .iter()
        .map(|&i| (x[i] - exact[i]).abs() / scale)
        .fold(0.0, f64::max)
}

fn windowed_cut_mesh() -> PolyMesh {
    cut_mesh_where(
        &generate(MeshKind::Quads, 4).unwrap(),
        &CutLine::new(0.4, 1.0, 0.63).unwrap(),
        |_, f| f.centroid().x < 0.5,
    )
    .unwrap()
}

#[test]
fn criterion_3_patch_tests() {
    let start = Instant::now();
    let cut = windowed_cut_mesh();
    let hanging = cut.hanging_corners();
    let holed = holed_square_mesh();
    let meshes = [
        ("quads", generate(MeshKind::Quads, 4).unwrap()),
        (
            "distorted quads",
            generate(MeshKind::DistortedQuads, 4).unwrap(),
        ),
        ("line cut", cut),
        ("holed", holed),
    ];
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    for (name, mesh) in &meshes {
        let errs: Vec<f64> = (1..=3).map(|k| patch_error(mesh, k)).collect();
        worst = errs.iter().copied().fold(worst, f64::max);
        details.push(format!(
            "{name} {:.1e}/{:.1e}/{:.1e}",
            errs[0], errs[1], errs[2]
        ));
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-9 && hanging > 0 && elapsed < Duration::from_secs(30);
    report(
        3,
        "patch tests",
        pass,
        &format!(
            "k=1/2/3: {}; {hanging} hanging corners; limit 1e-9, 30 s",
            details.join(", ")
        ),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_4_convergence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for family in [MeshKind::Quads, MeshKind::DistortedQuads] {
        for k in 1..=3 {
            let config = StudyConfig {
                family,
                levels: 4,
                degree: k,
                coarsest: 4,
                ..Default::default()
            };
            let rows = convergence_study(&config, &Problem::SinSin).unwrap();
            let last = rows.last().unwrap();
            let (l2, h1) = (last.rate_l2.unwrap(), last.rate_h1.unwrap());
            let ok_l2 = (l2 - (k + 1) as f64).abs() <= 0.2;
            let ok_h1 = (h1 - k as f64).abs() <= 0.2;
            lines.push(format!("{family} k={k}: L2 {l2:.3}, H1 {h1:.3}"));
            if !ok_l2 {
                failures.push(format!(
                    "{family} k={k} L2 rate {l2:.3} (expected {})",
                    k + 1
                ));
            }
            if !ok_h1 {
                failures.push(format!("{family} k={k} H1 rate {h1:.3} (expected {k})"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(120);
    let detail = if failures.is_empty() {
        lines.join("; ")
    } else {
        format!(
            "{}; off by more than 0.2: {}",
            lines.join("; "),
            failures.join(", ")
        )
    };
    report(4, "convergence rates", pass, &detail, elapsed);
    assert!(pass, "{detail}");
}

fn hexagon() -> Facet {
    let pts: Vec<Point2> = (0..6)
        .map(|i| {
            let a = std::f64::consts::PI * i as f64 / 3.0;
            Point2::new(a.cos(), a.sin())
        })
        .collect();
    Facet::polygon(&pts).unwrap()
}

#[test]
fn criterion_5_quadrature_compression() {
    let start = Instant::now();
    let mut polygons: Vec<Facet> = element_set(SEED + 1, 5)
        .into_iter()
        .map(|(_, f)| f)
        .collect();
    polygons.push(hexagon());
    let (mut worst, mut rules, mut oversize, mut negative, mut failed) = (0.0f64, 0, 0, 0, 0);
    for f in &polygons {
        let frame = Frame::of_facet(f);
        for d in 0..=8 {
            let c = compress_rule(&polygon_rule(f, d).unwrap(), &frame);
            rules += 1;
            failed += usize::from(c.failed);
            oversize += usize::from(c.rule.len() > compressed_size_bound(d));
            negative += usize::from(c.rule.weights.iter().any(|&w| w < 0.0));
            worst = worst.max(exactness_error(&c.rule, f, &frame, d));
        }
    }

    let cube = box_rule(
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 1.0, 1.0),
        [3, 4, 2],
        2,
    );
    let before = cube.len();
    let cube = Rule3 { degree: 2, ..cube };
    let c3 = compress_rule_3d(&cube, Point3::new(0.5, 0.5, 0.5), 3f64.sqrt());
    let mut worst_3d: f64 = 0.0;
    for e in monomials_3d(2) {
        let m = |q: Point3| q.x.powi(e[0] as i32) * q.y.powi(e[1] as i32) * q.z.powi(e[2] as i32);
        let exact = 1.0 / ((e[0] + 1) * (e[1] + 1) * (e[2] + 1)) as f64;
        worst_3d = worst_3d.max((c3.rule.integrate(m) - exact).abs());
    }
    let negative_3d = c3.rule.weights.iter().any(|&w| w < 0.0);

    let pass = worst <= 1e-12
        && oversize == 0
        && negative == 0
        && failed == 0
        && !c3.failed
        && !negative_3d
        && c3.rule.len() <= 10
        && worst_3d <= 1e-12;
    report(
        5,
        "quadrature compression",
        pass,
        &format!(
            "{rules} 2D rules (d=0..8): {oversize} over the size bound, {negative} with negative weights, \
             {failed} failed, max moment error {worst:.3e}; cube: {before} -> {} points, max moment error {worst_3d:.3e}",
            c3.rule.len()
        ),
        start.elapsed(),
    );
    assert!(pass);
}

#[test]
fn criterion_6_geometry() {
    let start = Instant::now();
    let p = Point2::new;
    let square = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
    let hole = vec![p(0.25, 0.25), p(0.25, 0.75), p(0.75, 0.75), p(0.75, 0.25)];
    let area = Facet::with_holes(&square, &[hole]).unwrap().area();
    let cube = Polyhedron::axis_box(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 1.0, 1.0))
        .unwrap()
        .volume();
    let tet = Polyhedron::new(
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ],
        vec![
            vec![vec![0, 2, 1]],
            vec![vec![0, 1, 3]],
            vec![vec![0, 3, 2]],
            vec![vec![1, 2, 3]],
        ],
    )
    .unwrap()
    .volume();
    let (e_area, e_cube, e_tet) = (
        (area - 0.75).abs(),
        (cube - 1.0).abs(),
        (tet - 1.0 / 6.0).abs(),
    );
    let pass = e_area <= 1e-14 && e_cube <= 1e-13 && e_tet <= 1e-13;
    report(
        6,
        "geometry",
        pass,
        &format!("holed square area error {e_area:.1e}, cube volume error {e_cube:.1e}, tetrahedron volume error {e_tet:.1e}"),
        start.elapsed(),
    );
    assert!(pass);
}

fn translated(mesh: &PolyMesh, dx: f64) -> PolyMesh {
    let vertices = mesh
        .vertices()
        .iter()
        .map(|v| Point2::new(v.x + dx, v.y))
        .collect();
    PolyMesh::from_loops(vertices, &mesh.element_loops()).unwrap()
}

#[test]
fn criterion_7_mesh_operations() {
    let start = Instant::now();
    let base = generate(MeshKind::DistortedQuads, 6).unwrap();
    let lines = [
        CutLine::new(1.0, 0.0, 0.5).unwrap(),
        CutLine::new(0.3, 1.0, 0.7).unwrap(),
        CutLine::through(Point2::new(0.0, 0.05), Point2::new(1.0, 0.93)).unwrap(),
    ];
    let mut cut_error: f64 = 0.0;
    let mut mesh = base.clone();
    for line in &lines {
        mesh = cut_mesh(&mesh, line).unwrap();
        cut_error =
            cut_error.max((mesh.total_area() - base.total_area()).abs() / base.total_area());
    }
    let windowed = windowed_cut_mesh();
    cut_error = cut_error.max((windowed.total_area() - 1.0).abs());

    let a = generate(MeshKind::Quads, 2).unwrap();
    let b = translated(&generate(MeshKind::Quads, 3).unwrap(), 1.0);
    let merged = merge_meshes(&a, &b, DEFAULT_MERGE_TOL).unwrap();
    let conforming = merged.validate().is_ok();
    let merge_error = (merged.total_area() - (a.total_area() + b.total_area())).abs() / 2.0;
    let hanging = merged.hanging_corners();
    let patch = (1..=3).map(|k| patch_error(&merged, k)).fold(0.0, f64::max);

    let pass =
        cut_error <= 1e-12 && conforming && merge_error <= 1e-12 && hanging > 0 && patch <= 1e-9;
    report(
        7,
        "mesh operations",
        pass,
        &format!(
            "cut area error {cut_error:.1e}; merge conforming={conforming}, area error {merge_error:.1e}, \
             {hanging} hanging corners, patch error {patch:.1e}"
        ),
        start.elapsed(),
    );
    assert!(pass);
}

#[test]
fn criterion_8_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_polyvem"))
            .args([
                "convergence",
                "--family",
                "distortedQuads",
                "--levels",
                "3",
                "--degree",
                "2",
            ])
            .arg("--out")
            .arg(&path)
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
        std::fs::read(path).unwrap()
    };
    let first = run("first.csv");
    let second = run("second.csv");
    let pass = first == second && !first.is_empty();
    report(
        8,
        "determinism",
        pass,
        &format!(
            "two convergence runs, {} bytes each, identical={}",
            first.len(),
            first == second
        ),
        start.elapsed(),
    );
    assert!(pass);
}
