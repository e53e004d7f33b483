use thiserror::Error;

use crate::localmat::MatrixTag;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate in vertex {0}")]
    NonFinite(usize),
    #[error("loop has {0} vertices, at least 3 are required")]
    TooFewVertices(usize),
    #[error("zero-length edge between vertices {0} and {1}")]
    ZeroLengthEdge(usize, usize),
    #[error("loop has zero signed area")]
    DegenerateLoop,
    #[error("loop signed area contradicts its declared orientation")]
    InvalidOrientation,
    #[error("hole {0} is not strictly inside the outer loop")]
    HoleOutside(usize),
    #[error("holes {0} and {1} overlap")]
    HolesOverlap(usize, usize),
    #[error("facet loops intersect each other")]
    SelfIntersecting,
    #[error("facet has non-positive area {0}")]
    NonPositiveArea(f64),
    #[error("triangulation failed: {0}")]
    TriangulationFailure(String),
    #[error("polyhedron surface is not closed: edge ({0}, {1}) is not paired")]
    OpenSurface(usize, usize),
    #[error("face {0} is not planar")]
    NonPlanarFace(usize),
    #[error("vertex index {0} out of range")]
    IndexOutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("compression residual {residual:e} exceeds tolerance")]
    CompressionFailure { residual: f64 },
    #[error("invalid quadrature request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("moment ({0}, {1}) exceeds degree k-2 = {2} and is not a degree of freedom")]
    OutOfRangeExponents(usize, usize, isize),
    #[error("degree must be at least 1")]
    InvalidDegree,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocalMatrixError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("no routine registered for matrix tag {0:?}")]
    UnknownTag(MatrixTag),
    #[error("dependency cycle through matrix tag {0:?}")]
    DependencyCycle(MatrixTag),
    #[error("G~ is singular (degenerate element geometry)")]
    SingularG,
    #[error("monomial mass matrix H is singular or ill-conditioned")]
    SingularH,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("element {element}: {message}")]
    InvariantViolation { element: usize, message: String },
    #[error("mesh invariant violated: {0}")]
    Invalid(String),
    #[error("cut line coefficients must not both be zero")]
    InvalidLine,
    #[error("cut line crosses the hole of element {0}")]
    CutThroughHole(usize),
    #[error("meshes do not share a common boundary")]
    NoCommonBoundary,
    #[error("meshes overlap")]
    OverlapDetected,
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {residual:e})")]
    MaxIterExceeded { iterations: usize, residual: f64 },
    #[error("element {element}: {source}")]
    Element {
        element: usize,
        #[source]
        source: LocalMatrixError,
    },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("system size mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    LocalMatrix(#[from] LocalMatrixError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unknown problem '{0}' (expected sinsin, polyK or file:<path>)")]
    UnknownProblem(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
