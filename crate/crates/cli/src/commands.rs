use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use polyvem::localmat::{
    find_or_compute, ElementMatrixCache, MatrixRegistry, MatrixTag, VemElement,
};
use polyvem::mesh::{self, CutLine, MeshKind, PolyMesh};
use polyvem::monomials::Frame;
use polyvem::output;
use polyvem::problem::Problem;
use polyvem::quadrature::{compress_rule, compressed_size_bound, exactness_error, polygon_rule};
use polyvem::study::{convergence_study, solve_problem, StudyConfig};
use polyvem::Error;

use crate::{Command, MeshCommand, MeshSource};

/// Failure of a command: bad input (exit 1) or a numerical failure (exit 2).
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Mesh(_) | Error::Geometry(_) | Error::Io(_) | Error::UnknownProblem(_) => {
                CliError::Input(e.to_string())
            }
            Error::Quadrature(_) | Error::Space(_) | Error::LocalMatrix(_) | Error::Solve(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

impl From<polyvem::error::MeshError> for CliError {
    fn from(e: polyvem::error::MeshError) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Solve {
            source,
            degree,
            problem,
            out,
            errors,
            tol,
            dump_matrices,
            dump_dir,
        } => solve(
            &source,
            degree,
            &problem,
            out,
            errors,
            tol,
            dump_matrices,
            &dump_dir,
        ),
        Command::Convergence {
            family,
            levels,
            degree,
            problem,
            coarsest,
            tol,
            out,
        } => {
            let config = StudyConfig {
                family,
                levels,
                degree,
                coarsest,
                tol,
            };
            convergence(&config, &problem, out)
        }
        Command::Mesh { command } => mesh_command(command),
        Command::Quad {
            source,
            degree,
            compress,
            out,
        } => quad(&source, degree, compress, out),
    }
}

fn check_degree(k: usize) -> CliResult {
    if k == 0 {
        return Err(CliError::Input("degree must be at least 1".into()));
    }
    Ok(())
}

fn parse_generated(spec: &str) -> CliResult<PolyMesh> {
    let (kind, n) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("expected <family>:<n>, got '{spec}'")))?;
    let kind: MeshKind = kind.parse().map_err(CliError::Input)?;
    let n: usize = n
        .parse()
        .map_err(|_| CliError::Input(format!("invalid division count '{n}'")))?;
    Ok(mesh::generate(kind, n)?)
}

fn load_mesh(source: &MeshSource) -> CliResult<PolyMesh> {
    match (&source.mesh, &source.generate) {
        (Some(path), _) => Ok(mesh::read_mesh(path)?),
        (None, Some(spec)) => parse_generated(spec),
        (None, None) => Err(CliError::Input("either --mesh or --gen is required".into())),
    }
}

fn write_text(path: &Path, text: &str) -> CliResult {
    std::fs::write(path, text)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_numbers(text: &str, count: usize, what: &str) -> CliResult<Vec<f64>> {
    let values: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("invalid {what} '{text}'")))?;
    if values.len() != count {
        return Err(CliError::Input(format!(
            "{what} needs {count} comma-separated numbers"
        )));
    }
    Ok(values)
}

#[allow(clippy::too_many_arguments)]
fn solve(
    source: &MeshSource,
    degree: usize,
    problem: &str,
    out: Option<PathBuf>,
    errors: Option<PathBuf>,
    tol: f64,
    dump: Option<usize>,
    dump_dir: &Path,
) -> CliResult {
    check_degree(degree)?;
    let mesh = load_mesh(source)?;
    let problem = Problem::from_name(problem, degree)?;
    if let Some(e) = dump {
        dump_matrices(&mesh, e, degree, dump_dir)?;
    }
    let outcome = solve_problem(&mesh, degree, &problem, tol)?;
    let csv = output::errors_csv(
        mesh.mesh_size(),
        outcome.system.dofs.len(),
        outcome.errors.l2,
        outcome.errors.h1_semi,
        outcome.report.iterations,
        outcome.report.residual,
    );
    emit(errors.as_deref(), &csv)?;
    if let Some(path) = out {
        // vertex dofs come first in the global numbering
        let u = &outcome.solution[..mesh.num_vertices()];
        let coefficients =
            polyvem::system::projection_coefficients(&outcome.system, &outcome.solution);
        let text = output::vtk_string(&mesh, u, &coefficients)?;
        write_text(&path, &text)?;
    }
    log::info!(
        "assembly {:?}, solve {:?}",
        outcome.assembly_time,
        outcome.report.wall_time
    );
    Ok(())
}

fn dump_matrices(mesh: &PolyMesh, element: usize, degree: usize, dir: &Path) -> CliResult {
    if element >= mesh.num_elements() {
        return Err(CliError::Input(format!(
            "element {element} does not exist (mesh has {})",
            mesh.num_elements()
        )));
    }
    let el = VemElement::new(mesh.element(element), element, degree).map_err(Error::from)?;
    let registry = MatrixRegistry::standard();
    let mut cache = ElementMatrixCache::new();
    for tag in MatrixTag::BUILTIN {
        let m = find_or_compute(&registry, &mut cache, &el, tag).map_err(Error::from)?;
        let path = dir.join(format!("element{element}_{}.csv", tag.name()));
        write_text(&path, &output::matrix_csv(m))?;
    }
    Ok(())
}

fn convergence(config: &StudyConfig, problem: &str, out: Option<PathBuf>) -> CliResult {
    check_degree(config.degree)?;
    if config.levels == 0 || config.coarsest == 0 {
        return Err(CliError::Input(
            "levels and coarsest must be positive".into(),
        ));
    }
    let problem = Problem::from_name(problem, config.degree)?;
    let rows = convergence_study(config, &problem)?;
    emit(out.as_deref(), &output::convergence_csv(&rows))?;
    let last = rows.last().expect("at least one level");
    let summary = match (last.rate_l2, last.rate_h1) {
        (Some(l2), Some(h1)) => format!(
            "observed rates (k = {}): L2 {l2:.3} (expected {}), H1 {h1:.3} (expected {})",
            config.degree,
            config.degree + 1,
            config.degree
        ),
        _ => "single level: no rates".to_string(),
    };
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn mesh_command(command: MeshCommand) -> CliResult {
    match command {
        MeshCommand::Gen { spec, out } => {
            let m = parse_generated(&spec)?;
            emit(out.as_deref(), &mesh::to_poly2d(&m))
        }
        MeshCommand::Cut {
            input,
            line,
            window,
            out,
        } => {
            let m = mesh::read_mesh(&input)?;
            let c = parse_numbers(&line, 3, "line")?;
            let line = CutLine::new(c[0], c[1], c[2])?;
            let cut = match window {
                None => mesh::cut_mesh(&m, &line)?,
                Some(w) => {
                    let w = parse_numbers(&w, 4, "window")?;
                    mesh::cut_mesh_where(&m, &line, |_, f| {
                        let c = f.centroid();
                        c.x >= w[0] && c.x <= w[1] && c.y >= w[2] && c.y <= w[3]
                    })?
                }
            };
            emit(out.as_deref(), &mesh::to_poly2d(&cut))
        }
        MeshCommand::Merge {
            first,
            second,
            merge_tol,
            out,
        } => {
            let a = mesh::read_mesh(&first)?;
            let b = mesh::read_mesh(&second)?;
            let merged = mesh::merge_meshes(&a, &b, merge_tol)?;
            emit(out.as_deref(), &mesh::to_poly2d(&merged))
        }
        MeshCommand::Info { input } => {
            let m = mesh::read_mesh(&input)?;
            print!("{}", info(&m));
            Ok(())
        }
    }
}

fn info(m: &PolyMesh) -> String {
    let holed = m
        .elements()
        .iter()
        .filter(|f| !f.holes().is_empty())
        .count();
    let mut s = String::new();
    let _ = writeln!(s, "vertices: {}", m.num_vertices());
    let _ = writeln!(s, "elements: {}", m.num_elements());
    let _ = writeln!(s, "edges: {}", m.num_edges());
    let _ = writeln!(s, "boundary edges: {}", m.num_boundary_edges());
    let _ = writeln!(s, "elements with holes: {holed}");
    let _ = writeln!(s, "hanging corners: {}", m.hanging_corners());
    let _ = writeln!(s, "area: {}", output::fmt_f64(m.total_area()));
    let _ = writeln!(s, "h: {}", output::fmt_f64(m.mesh_size()));
    let verdict = match m.validate() {
        Ok(()) => "conforming".to_string(),
        Err(e) => format!("not conforming ({e})"),
    };
    let _ = writeln!(s, "conformity: {verdict}");
    s
}

/// Exactness threshold of the quadrature verdict, relative to the element area.
const QUAD_EXACTNESS: f64 = 1e-12;

fn quad(source: &MeshSource, degree: usize, compress: bool, out: Option<PathBuf>) -> CliResult {
    let m = load_mesh(source)?;
    let mut table = String::from("element,point,x,y,weight\n");
    let (mut before, mut after, mut max_after) = (0usize, 0usize, 0usize);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (e, f) in m.elements().iter().enumerate() {
        let base = polygon_rule(f, degree).map_err(Error::from)?;
        before += base.len();
        let frame = Frame::of_facet(f);
        let rule = if compress {
            let c = compress_rule(&base, &frame);
            if c.failed {
                log::warn!(
                    "element {e}: compression failed, residual {:e}",
                    c.relative_residual
                );
                failures.push(e);
            }
            c.rule
        } else {
            base
        };
        after += rule.len();
        max_after = max_after.max(rule.len());
        worst = worst.max(exactness_error(&rule, f, &frame, degree));
        for (i, (p, w)) in rule.iter().enumerate() {
            let _ = writeln!(
                table,
                "{e},{i},{},{},{}",
                output::fmt_f64(p.x),
                output::fmt_f64(p.y),
                output::fmt_f64(w)
            );
        }
    }
    emit(out.as_deref(), &table)?;
    let mut summary = String::new();
    let _ = writeln!(summary, "elements: {}", m.num_elements());
    let _ = writeln!(summary, "degree: {degree}");
    let _ = writeln!(summary, "points before: {before}");
    let _ = writeln!(summary, "points after: {after}");
    let _ = writeln!(
        summary,
        "max points per element after: {max_after} (bound {})",
        compressed_size_bound(degree)
    );
    let _ = writeln!(summary, "compression failures: {}", failures.len());
    for e in &failures {
        let _ = writeln!(summary, "  element {e}");
    }
    let _ = writeln!(summary, "max exactness error: {worst:e}");
    let verdict = if worst <= QUAD_EXACTNESS {
        "PASS"
    } else {
        "FAIL"
    };
    let _ = writeln!(summary, "exactness: {verdict}");
    if out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}
