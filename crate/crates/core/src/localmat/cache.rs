//! Tag-keyed storage of local matrices with dependency-ordered computation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{DenseMatrix, VemElement};
use crate::error::LocalMatrixError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixTag {
    DMat,
    BMat,
    GNodal,
    HNodal,
    PiNablaStar,
    PiNabla,
    PiZeroStar,
    Stiffness,
    /// Slot for routines registered by users of the library.
    Custom(u32),
}

impl MatrixTag {
    pub const BUILTIN: [MatrixTag; 8] = [
        MatrixTag::DMat,
        MatrixTag::BMat,
        MatrixTag::GNodal,
        MatrixTag::HNodal,
        MatrixTag::PiNablaStar,
        MatrixTag::PiNabla,
        MatrixTag::PiZeroStar,
        MatrixTag::Stiffness,
    ];

    pub fn name(&self) -> String {
        match self {
            MatrixTag::DMat => "DMAT".into(),
            MatrixTag::BMat => "BMAT".into(),
            MatrixTag::GNodal => "GNODALMAT".into(),
            MatrixTag::HNodal => "HNODALMAT".into(),
            MatrixTag::PiNablaStar => "PINABLASTARMAT".into(),
            MatrixTag::PiNabla => "PINABLAMAT".into(),
            MatrixTag::PiZeroStar => "PIZEROSTARMAT".into(),
            MatrixTag::Stiffness => "STIFFOPERATOR".into(),
            MatrixTag::Custom(i) => format!("CUSTOM{i}"),
        }
    }
}

impl fmt::Display for MatrixTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

type ComputeFn =
    dyn Fn(&VemElement, &ElementMatrixCache) -> Result<DenseMatrix, LocalMatrixError> + Send + Sync;

/// A computation routine and the tags it reads from the cache.
pub struct MatrixRoutine {
    pub dependencies: Vec<MatrixTag>,
    compute: Box<ComputeFn>,
}

impl MatrixRoutine {
    pub fn new(
        dependencies: Vec<MatrixTag>,
        compute: impl Fn(&VemElement, &ElementMatrixCache) -> Result<DenseMatrix, LocalMatrixError>
            + Send
            + Sync
            + 'static,
    ) -> Self {
        Self {
            dependencies,
            compute: Box::new(compute),
        }
    }
}

impl fmt::Debug for MatrixRoutine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixRoutine")
            .field("dependencies", &self.dependencies)
            .finish_non_exhaustive()
    }
}

/// One routine per tag.
#[derive(Debug, Default)]
pub struct MatrixRegistry {
    routines: HashMap<MatrixTag, MatrixRoutine>,
}

fn dep(cache: &ElementMatrixCache, tag: MatrixTag) -> &DenseMatrix {
    cache
        .find(tag)
        .expect("dependencies are resolved before a routine runs")
}

impl MatrixRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry with every built-in tag.
    pub fn standard() -> Self {
        use MatrixTag::*;
        let mut r = Self::empty();
        r.register(DMat, vec![], |el, _| super::compute_d(el));
        r.register(BMat, vec![], |el, _| super::compute_b(el));
        r.register(GNodal, vec![], |el, _| super::compute_g(el));
        r.register(HNodal, vec![], |el, _| super::compute_h(el));
        r.register(PiNablaStar, vec![GNodal, BMat], |el, c| {
            super::pi_nabla_star(el, dep(c, GNodal), dep(c, BMat))
        });
        r.register(PiNabla, vec![DMat, PiNablaStar], |_, c| {
            Ok(super::pi_nabla(dep(c, DMat), dep(c, PiNablaStar)))
        });
        r.register(PiZeroStar, vec![HNodal], |el, c| {
            super::pi_zero_star(el, dep(c, HNodal))
        });
        r.register(Stiffness, vec![GNodal, PiNablaStar, PiNabla], |_, c| {
            Ok(super::stiffness(
                dep(c, GNodal),
                dep(c, PiNablaStar),
                dep(c, PiNabla),
            ))
        });
        r
    }

    /// Registers (or replaces) the routine of `tag`.
    pub fn register(
        &mut self,
        tag: MatrixTag,
        dependencies: Vec<MatrixTag>,
        compute: impl Fn(&VemElement, &ElementMatrixCache) -> Result<DenseMatrix, LocalMatrixError>
            + Send
            + Sync
            + 'static,
    ) {
        self.routines
            .insert(tag, MatrixRoutine::new(dependencies, compute));
    }

    pub fn get(&self, tag: MatrixTag) -> Option<&MatrixRoutine> {
        self.routines.get(&tag)
    }
}

/// Per-element compartment of computed matrices.
#[derive(Debug, Clone, Default)]
pub struct ElementMatrixCache {
    matrices: BTreeMap<MatrixTag, DenseMatrix>,
    computations: usize,
}

impl ElementMatrixCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, tag: MatrixTag, m: DenseMatrix) {
        self.matrices.insert(tag, m);
    }

    pub fn find(&self, tag: MatrixTag) -> Option<&DenseMatrix> {
        self.matrices.get(&tag)
    }

    pub fn contains(&self, tag: MatrixTag) -> bool {
        self.matrices.contains_key(&tag)
    }

    pub fn tags(&self) -> impl Iterator<Item = MatrixTag> + '_ {
        self.matrices.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MatrixTag, &DenseMatrix)> {
        self.matrices.iter().map(|(t, m)| (*t, m))
    }

    /// Number of routine invocations performed through this cache.
    pub fn computations(&self) -> usize {
        self.computations
    }
}

/// Returns the cached matrix of `tag`, computing it and every missing
/// dependency first.
pub fn find_or_compute<'c>(
    registry: &MatrixRegistry,
    cache: &'c mut ElementMatrixCache,
    element: &VemElement,
    tag: MatrixTag,
) -> Result<&'c DenseMatrix, LocalMatrixError> {
    let mut stack = Vec::new();
    resolve(registry, cache, element, tag, &mut stack)?;
    Ok(cache.find(tag).expect("resolved"))
}

fn resolve(
    registry: &MatrixRegistry,
    cache: &mut ElementMatrixCache,
    element: &VemElement,
    tag: MatrixTag,
    stack: &mut Vec<MatrixTag>,
) -> Result<(), LocalMatrixError> {
    if cache.contains(tag) {
        return Ok(());
    }
    if stack.contains(&tag) {
        return Err(LocalMatrixError::DependencyCycle(tag));
    }
    let routine = registry.get(tag).ok_or(LocalMatrixError::UnknownTag(tag))?;
    stack.push(tag);
    for &d in &routine.dependencies {
        resolve(registry, cache, element, d, stack)?;
    }
    stack.pop();
    let m = (routine.compute)(element, cache)?;
    cache.computations += 1;
    cache.insert(tag, m);
    Ok(())
}
