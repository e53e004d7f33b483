//! CSV and legacy VTK writers.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::MeshError;
use crate::localmat::DenseMatrix;
use crate::mesh::PolyMesh;
use crate::study::ConvergenceRow;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub const CONVERGENCE_HEADER: &str = "level,h,nDof,errL2,errH1,rateL2,rateH1";

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from(CONVERGENCE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.level,
            fmt_f64(r.h),
            r.n_dof,
            fmt_f64(r.err_l2),
            fmt_f64(r.err_h1),
            fmt_opt(r.rate_l2),
            fmt_opt(r.rate_h1)
        );
    }
    s
}

/// One-row error table of a single solve.
pub fn errors_csv(
    h: f64,
    n_dof: usize,
    err_l2: f64,
    err_h1: f64,
    iterations: usize,
    residual: f64,
) -> String {
    format!(
        "h,nDof,errL2,errH1,cgIterations,cgResidual\n{},{n_dof},{},{},{iterations},{}\n",
        fmt_f64(h),
        fmt_f64(err_l2),
        fmt_f64(err_h1),
        fmt_f64(residual)
    )
}

/// Dense matrix as CSV, one matrix row per line.
pub fn matrix_csv(m: &DenseMatrix) -> String {
    let mut s = (0..m.ncols())
        .map(|j| format!("c{j}"))
        .collect::<Vec<_>>()
        .join(",");
    s.push('\n');
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_f64(m[(i, j)])).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

const VTK_TRIANGLE: u8 = 5;
const VTK_POLYGON: u8 = 7;

/// Legacy ASCII unstructured grid with the vertex values `u` as point data
/// and, per cell, the owning element id and the Π∇ coefficients of that
/// element. Elements with holes are written as triangles that all carry the
/// parent element's data.
pub fn vtk_string(
    mesh: &PolyMesh,
    u: &[f64],
    coefficients: &[Vec<f64>],
) -> Result<String, MeshError> {
    assert_eq!(u.len(), mesh.num_vertices());
    assert_eq!(coefficients.len(), mesh.num_elements());

    let mut cells: Vec<(u8, Vec<usize>, usize)> = Vec::new();
    for (e, f) in mesh.elements().iter().enumerate() {
        if f.holes().is_empty() {
            cells.push((VTK_POLYGON, f.outer().ids().to_vec(), e));
            continue;
        }
        let ids: HashMap<(u64, u64), usize> = f
            .vertex_ids()
            .zip(f.vertex_points())
            .map(|(i, p)| ((p.x.to_bits(), p.y.to_bits()), i))
            .collect();
        let tris = f
            .triangulate()
            .map_err(|err| MeshError::InvariantViolation {
                element: e,
                message: err.to_string(),
            })?;
        for t in tris {
            let mut conn = Vec::with_capacity(3);
            for p in t {
                let id = ids.get(&(p.x.to_bits(), p.y.to_bits())).ok_or_else(|| {
                    MeshError::InvariantViolation {
                        element: e,
                        message: "triangulation introduced a new point".into(),
                    }
                })?;
                conn.push(*id);
            }
            cells.push((VTK_TRIANGLE, conn, e));
        }
    }

    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\npolyvem solution\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", mesh.num_vertices());
    for p in mesh.vertices() {
        let _ = writeln!(s, "{} {} 0", fmt_f64(p.x), fmt_f64(p.y));
    }
    let size: usize = cells.iter().map(|c| c.1.len() + 1).sum();
    let _ = writeln!(s, "CELLS {} {size}", cells.len());
    for (_, conn, _) in &cells {
        let ids: Vec<String> = conn.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "{} {}", conn.len(), ids.join(" "));
    }
    let _ = writeln!(s, "CELL_TYPES {}", cells.len());
    for (t, _, _) in &cells {
        let _ = writeln!(s, "{t}");
    }
    let _ = writeln!(s, "POINT_DATA {}", mesh.num_vertices());
    s.push_str("SCALARS u double 1\nLOOKUP_TABLE default\n");
    for v in u {
        let _ = writeln!(s, "{}", fmt_f64(*v));
    }
    let _ = writeln!(s, "CELL_DATA {}", cells.len());
    s.push_str("SCALARS element_id int 1\nLOOKUP_TABLE default\n");
    for (_, _, e) in &cells {
        let _ = writeln!(s, "{e}");
    }
    let ncoef = coefficients.first().map_or(0, Vec::len);
    for c in 0..ncoef {
        let _ = writeln!(s, "SCALARS pi_nabla_{c} double 1\nLOOKUP_TABLE default");
        for (_, _, e) in &cells {
            let _ = writeln!(
                s,
                "{}",
                fmt_f64(coefficients[*e].get(c).copied().unwrap_or(0.0))
            );
        }
    }
    Ok(s)
}
