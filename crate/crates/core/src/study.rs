//! Single solves and h-refinement studies.

use std::time::Duration;

use crate::error::Error;
use crate::geometry::Point2;
use crate::mesh::{generate, MeshKind, PolyMesh};
use crate::problem::Problem;
use crate::system::{
    apply_dirichlet, assemble, error_norms, solve, DirichletData, ErrorNorms, SolveReport,
    SparseSystem,
};

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub system: SparseSystem,
    /// Full dof vector, boundary values included.
    pub solution: Vec<f64>,
    pub report: SolveReport,
    pub errors: ErrorNorms,
    pub assembly_time: Duration,
}

/// Assembles, imposes `u = u_exact` on the boundary, solves and measures the
/// error of `problem` on `mesh`.
pub fn solve_problem(
    mesh: &PolyMesh,
    degree: usize,
    problem: &Problem,
    tol: f64,
) -> Result<SolveOutcome, Error> {
    let f = |p: Point2| problem.source(p);
    let g = |p: Point2| problem.exact(p);
    let grad = |p: Point2| problem.gradient(p);
    let start = std::time::Instant::now();
    let system = assemble(mesh, degree, &f)?;
    let assembly_time = start.elapsed();
    let data = DirichletData::new(mesh, &system.dofs, &g);
    let reduced = apply_dirichlet(&system, data);
    let (solution, report) = solve(&reduced, tol, None)?;
    let errors = error_norms(mesh, &system, &solution, &g, &grad)?;
    log::info!(
        "k={degree} elements={} dofs={} cg iterations={} residual={:e}",
        mesh.num_elements(),
        system.dofs.len(),
        report.iterations,
        report.residual
    );
    Ok(SolveOutcome {
        system,
        solution,
        report,
        errors,
        assembly_time,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    /// Largest element diameter.
    pub h: f64,
    pub n_dof: usize,
    pub err_l2: f64,
    pub err_h1: f64,
    pub rate_l2: Option<f64>,
    pub rate_h1: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyConfig {
    pub family: MeshKind,
    pub levels: usize,
    pub degree: usize,
    /// Divisions per side on level 0; doubled on every level.
    pub coarsest: usize,
    pub tol: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            family: MeshKind::Quads,
            levels: 4,
            degree: 1,
            coarsest: 4,
            tol: crate::system::DEFAULT_TOLERANCE,
        }
    }
}

fn rate(prev: f64, cur: f64, h_prev: f64, h_cur: f64) -> f64 {
    (prev / cur).ln() / (h_prev / h_cur).ln()
}

pub fn convergence_study(
    config: &StudyConfig,
    problem: &Problem,
) -> Result<Vec<ConvergenceRow>, Error> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(config.levels);
    for level in 0..config.levels {
        let n = config.coarsest << level;
        let mesh = generate(config.family, n)?;
        let out = solve_problem(&mesh, config.degree, problem, config.tol)?;
        let h = mesh.mesh_size();
        let (rate_l2, rate_h1) = match rows.last() {
            Some(p) => (
                Some(rate(p.err_l2, out.errors.l2, p.h, h)),
                Some(rate(p.err_h1, out.errors.h1_semi, p.h, h)),
            ),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            level,
            h,
            n_dof: out.system.dofs.len(),
            err_l2: out.errors.l2,
            err_h1: out.errors.h1_semi,
            rate_l2,
            rate_h1,
        });
    }
    Ok(rows)
}
