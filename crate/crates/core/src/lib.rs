//! Arbitrary-order virtual element method for the Poisson problem on general
//! polygonal meshes.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`]: points, polygons with holes, polyhedra and their measures
//! * [`monomials`]: scaled monomial basis and its symbolic calculus
//! * [`quadrature`]: edge, polygon and face rules, NNLS compression
//! * [`vemspace`]: degrees of freedom of the local virtual space
//! * [`localmat`]: projector and stiffness matrices with a tag-keyed cache
//! * [`mesh`]: polygonal meshes, POLY2D I/O, generators, cut and merge
//! * [`system`]: assembly, boundary conditions, CG solve, error norms
//! * [`problem`], [`study`], [`output`]: presets, convergence studies, CSV/VTK

pub mod error;
pub mod geometry;
pub mod localmat;
pub mod mesh;
pub mod monomials;
pub mod output;
pub mod problem;
pub mod quadrature;
pub mod study;
pub mod system;
pub mod vemspace;

pub use error::{Error, Result};
