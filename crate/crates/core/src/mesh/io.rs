//! POLY2D text format.
//!
//! ```text
//! poly2d 1
//! <nVertices>
//! x y            (nVertices lines)
//! <nElements>
//! <nLoops>       (per element, then nLoops lines)
//! <nIds> id0 id1 ...
//! ```
//!
//! `#` starts a comment. The first loop of an element is the outer boundary
//! (counter-clockwise), the others are holes (clockwise); wrong orientations
//! are corrected with a warning.

use std::fmt::Write as _;
use std::path::Path;

use super::PolyMesh;
use crate::error::MeshError;
use crate::geometry::Point2;

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-empty line with comments stripped, split into tokens.
    fn next_tokens(&mut self) -> Result<(usize, Vec<&'a str>), MeshError> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let content = line.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                return Ok((i + 1, tokens));
            }
        }
        Err(MeshError::Parse {
            line: self.last + 1,
            message: "unexpected end of file".into(),
        })
    }

    fn next_count(&mut self, what: &str) -> Result<(usize, usize), MeshError> {
        let (line, tokens) = self.next_tokens()?;
        if tokens.len() != 1 {
            return Err(MeshError::Parse {
                line,
                message: format!("expected a single {what} count"),
            });
        }
        let n = parse_usize(tokens[0], line)?;
        Ok((line, n))
    }
}

fn parse_usize(s: &str, line: usize) -> Result<usize, MeshError> {
    s.parse().map_err(|_| MeshError::Parse {
        line,
        message: format!("invalid integer '{s}'"),
    })
}

fn parse_f64(s: &str, line: usize) -> Result<f64, MeshError> {
    let v: f64 = s.parse().map_err(|_| MeshError::Parse {
        line,
        message: format!("invalid number '{s}'"),
    })?;
    if !v.is_finite() {
        return Err(MeshError::Parse {
            line,
            message: format!("non-finite coordinate '{s}'"),
        });
    }
    Ok(v)
}

pub fn parse_poly2d(text: &str) -> Result<PolyMesh, MeshError> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next_tokens()?;
    if header != ["poly2d", "1"] {
        return Err(MeshError::Parse {
            line,
            message: "expected header 'poly2d 1'".into(),
        });
    }

    let (_, nv) = lines.next_count("vertex")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, t) = lines.next_tokens()?;
        if t.len() != 2 {
            return Err(MeshError::Parse {
                line,
                message: "expected 'x y'".into(),
            });
        }
        vertices.push(Point2::new(parse_f64(t[0], line)?, parse_f64(t[1], line)?));
    }

    let (_, ne) = lines.next_count("element")?;
    let mut elements = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (line, nl) = lines.next_count("loop")?;
        if nl == 0 {
            return Err(MeshError::Parse {
                line,
                message: "an element needs at least one loop".into(),
            });
        }
        let mut loops = Vec::with_capacity(nl);
        for _ in 0..nl {
            let (line, t) = lines.next_tokens()?;
            let n = parse_usize(t[0], line)?;
            if t.len() != n + 1 {
                return Err(MeshError::Parse {
                    line,
                    message: format!("loop declares {n} ids but lists {}", t.len() - 1),
                });
            }
            let ids = t[1..]
                .iter()
                .map(|s| {
                    let id = parse_usize(s, line)?;
                    if id >= nv {
                        return Err(MeshError::Parse {
                            line,
                            message: format!("vertex id {id} out of range"),
                        });
                    }
                    Ok(id)
                })
                .collect::<Result<Vec<_>, _>>()?;
            loops.push(ids);
        }
        elements.push(loops);
    }
    if let Ok((line, _)) = lines.next_tokens() {
        return Err(MeshError::Parse {
            line,
            message: "trailing content after the last element".into(),
        });
    }
    PolyMesh::from_loops(vertices, &elements)
}

/// Serializes with shortest round-trip float formatting.
pub fn to_poly2d(mesh: &PolyMesh) -> String {
    let mut s = String::new();
    s.push_str("poly2d 1\n");
    let _ = writeln!(s, "{}", mesh.num_vertices());
    for p in mesh.vertices() {
        let _ = writeln!(s, "{:?} {:?}", p.x, p.y);
    }
    let _ = writeln!(s, "{}", mesh.num_elements());
    for loops in mesh.element_loops() {
        let _ = writeln!(s, "{}", loops.len());
        for l in loops {
            let _ = write!(s, "{}", l.len());
            for id in l {
                let _ = write!(s, " {id}");
            }
            s.push('\n');
        }
    }
    s
}

fn io_error(path: &Path, e: std::io::Error) -> MeshError {
    MeshError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<PolyMesh, MeshError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_poly2d(&text)
}

pub fn write_mesh(mesh: &PolyMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    let path = path.as_ref();
    std::fs::write(path, to_poly2d(mesh)).map_err(|e| io_error(path, e))
}
