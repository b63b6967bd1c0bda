//! Windows of bounded-geometry simplicial complexes and the combinatorial
//! operations on them: star and link, subdivisions, dual cells, products.

mod dual;
mod product;
mod simplex;
mod subdivide;
mod window;

use std::fmt::Debug;
use std::sync::OnceLock;

pub use dual::{dual_complex, dual_complex_with_orientation, DualBoundary, DualCell, DualCellComplex, Orientation};
pub use product::{product, CellWindow, ProductCell};
pub use simplex::{permutation_sign, OrientedSimplex, Simplex, VertexId};
pub use subdivide::{barycentric_subdivide, edge_length_squared, standard_subdivide, SubdivisionMap, VertexOrigin};
pub use window::{build_window, Metadata, SimplicialWindow, SubComplex, Vertex};

use crate::sparse::SparseMatrix;

/// A finite cell complex with signed incidences and per-dimension cell lists.
pub trait CellComplex {
    type Cell: Clone + Ord + Debug;

    fn top_dim(&self) -> usize;

    /// Cells of dimension `q`, sorted.
    fn cells(&self, q: usize) -> &[Self::Cell];

    fn cell_dim(&self, cell: &Self::Cell) -> usize;

    /// Signed codimension-1 faces.
    fn cell_boundary(&self, cell: &Self::Cell) -> Vec<(Self::Cell, i64)>;

    fn matrix_cache(&self) -> &MatrixCache;

    /// Whether the cell is flagged as touching the window rim.
    fn touches_boundary(&self, cell: &Self::Cell) -> bool;

    fn index_of(&self, cell: &Self::Cell) -> Option<usize> {
        self.cells(self.cell_dim(cell)).binary_search(cell).ok()
    }

    fn count(&self, q: usize) -> usize {
        if q > self.top_dim() { 0 } else { self.cells(q).len() }
    }

    /// Boundary `C_q -> C_{q-1}`, rows indexed by `(q-1)`-cells. Zero-row
    /// matrix for `q = 0`.
    fn boundary_matrix(&self, q: usize) -> &SparseMatrix {
        self.matrix_cache().boundary(q, || {
            let rows = if q == 0 { 0 } else { self.count(q - 1) };
            let mut entries = Vec::new();
            if q > 0 {
                for (c, cell) in self.cells_or_empty(q).iter().enumerate() {
                    for (face, sign) in self.cell_boundary(cell) {
                        let r = self.index_of(&face).expect("complex is closed under faces");
                        entries.push((r, c, sign));
                    }
                }
            }
            SparseMatrix::from_triplets(rows, self.count(q), entries)
        })
    }

    /// Coboundary `C^q -> C^{q+1}`: the transpose of the degree-`q+1` boundary.
    fn coboundary_matrix(&self, q: usize) -> &SparseMatrix {
        self.matrix_cache()
            .coboundary(q, || self.boundary_matrix(q + 1).transpose())
    }

    #[doc(hidden)]
    fn cells_or_empty(&self, q: usize) -> &[Self::Cell] {
        if q > self.top_dim() { &[] } else { self.cells(q) }
    }
}

/// Lazily built boundary and coboundary matrices.
#[derive(Debug, Clone, Default)]
pub struct MatrixCache {
    boundary: Vec<OnceLock<SparseMatrix>>,
    coboundary: Vec<OnceLock<SparseMatrix>>,
}

impl MatrixCache {
    pub fn new(top_dim: usize) -> Self {
        Self {
            boundary: (0..top_dim + 3).map(|_| OnceLock::new()).collect(),
            coboundary: (0..top_dim + 3).map(|_| OnceLock::new()).collect(),
        }
    }

    fn boundary(&self, q: usize, f: impl FnOnce() -> SparseMatrix) -> &SparseMatrix {
        self.boundary[q.min(self.boundary.len() - 1)].get_or_init(f)
    }

    fn coboundary(&self, q: usize, f: impl FnOnce() -> SparseMatrix) -> &SparseMatrix {
        self.coboundary[q.min(self.coboundary.len() - 1)].get_or_init(f)
    }
}
