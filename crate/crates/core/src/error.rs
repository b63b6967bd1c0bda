use thiserror::Error;

use crate::complex::Simplex;

/// Errors raised by the library. Variants are grouped by the subsystem that
/// produces them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("simplex {0} listed more than once")]
    DuplicateSimplex(Simplex),
    #[error("simplex {0:?} repeats a vertex")]
    NonSimplicial(Vec<u32>),
    #[error("simplex references undeclared vertex {0}")]
    UnknownVertex(u32),
    #[error("vertex id {0} declared twice or out of dense order")]
    BadVertexIds(u32),
    #[error("simplex {0} is not in the window")]
    UnknownSimplex(Simplex),
    #[error("window has no vertex positions")]
    MissingGeometry,
    #[error("position of vertex {0} has the wrong dimension")]
    BadPosition(u32),
    #[error("interior codimension-1 simplex {simplex} has {cofaces} cofaces (expected 2)")]
    NotManifoldLike { simplex: Simplex, cofaces: usize },
    #[error("window is not orientable (conflict at {0})")]
    NotOrientable(Simplex),
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("boundary of a degree-0 chain")]
    DegreeZero,
    #[error("chain support contains {0}, which is not a simplex of degree {1}")]
    SupportOutsideWindow(Simplex, usize),
    #[error("form of degree {form} integrated over a {simplex}-simplex")]
    DegreeMismatch { form: usize, simplex: usize },
    #[error("chain is not on a product window: {0}")]
    NotAProductWindow(String),
    #[error("chain support touches the window boundary at {0}")]
    SupportTouchesBoundary(Simplex),
    #[error("window is empty (no top simplices with an interior vertex)")]
    EmptyWindow,
    #[error("profiles cover different radii")]
    MismatchedRadii,
    #[error("need at least {needed} radii, got {got}")]
    TooFewRadii { needed: usize, got: usize },
    #[error("radii must be strictly increasing")]
    RadiiNotIncreasing,
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
