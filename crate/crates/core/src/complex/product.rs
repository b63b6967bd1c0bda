use std::fmt;

use super::{CellComplex, MatrixCache, SimplicialWindow, Simplex};

/// A product cell `σ × τ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductCell {
    pub left: Simplex,
    pub right: Simplex,
}

impl ProductCell {
    pub fn new(left: Simplex, right: Simplex) -> Self {
        Self { left, right }
    }

    pub fn dim(&self) -> usize {
        self.left.dim() + self.right.dim()
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.left.dim(), self.right.dim())
    }

    /// Leibniz rule: `∂(σ×τ) = ∂σ×τ + (−1)^{dim σ} σ×∂τ`.
    pub fn boundary(&self) -> Vec<(ProductCell, i64)> {
        let k = self.left.dim();
        let twist = if k % 2 == 0 { 1 } else { -1 };
        self.left
            .facets()
            .map(|(f, s)| (ProductCell::new(f, self.right.clone()), s))
            .chain(
                self.right
                    .facets()
                    .map(|(f, s)| (ProductCell::new(self.left.clone(), f), twist * s)),
            )
            .collect()
    }
}

impl fmt::Debug for ProductCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.left, self.right)
    }
}

/// Cell complex of a product of two windows, cells `σ × τ`.
#[derive(Debug, Clone)]
pub struct CellWindow {
    left: SimplicialWindow,
    right: SimplicialWindow,
    cells: Vec<Vec<ProductCell>>,
    cache: MatrixCache,
}

pub fn product(left: &SimplicialWindow, right: &SimplicialWindow) -> CellWindow {
    let dim = left.dim() + right.dim();
    let mut cells = vec![Vec::new(); dim + 1];
    for i in 0..=left.dim() {
        for j in 0..=right.dim() {
            for s in left.simplices(i) {
                for t in right.simplices(j) {
                    cells[i + j].push(ProductCell::new(s.clone(), t.clone()));
                }
            }
        }
    }
    for level in &mut cells {
        level.sort();
    }
    CellWindow { left: left.clone(), right: right.clone(), cells, cache: MatrixCache::new(dim) }
}

impl CellWindow {
    pub fn left(&self) -> &SimplicialWindow {
        &self.left
    }

    pub fn right(&self) -> &SimplicialWindow {
        &self.right
    }

    pub fn contains(&self, cell: &ProductCell) -> bool {
        self.left.contains(&cell.left) && self.right.contains(&cell.right)
    }

    /// A product vertex is on the rim when either factor vertex is.
    pub fn is_boundary_vertex(&self, cell: &ProductCell) -> bool {
        debug_assert_eq!(cell.dim(), 0);
        self.left.is_boundary_vertex(cell.left.vertices()[0]) || self.right.is_boundary_vertex(cell.right.vertices()[0])
    }
}

impl CellComplex for CellWindow {
    type Cell = ProductCell;

    fn top_dim(&self) -> usize {
        self.cells.len() - 1
    }

    fn cells(&self, q: usize) -> &[ProductCell] {
        self.cells.get(q).map_or(&[], Vec::as_slice)
    }

    fn cell_dim(&self, cell: &ProductCell) -> usize {
        cell.dim()
    }

    fn cell_boundary(&self, cell: &ProductCell) -> Vec<(ProductCell, i64)> {
        cell.boundary()
    }

    fn matrix_cache(&self) -> &MatrixCache {
        &self.cache
    }

    fn touches_boundary(&self, cell: &ProductCell) -> bool {
        cell.left.vertices().iter().any(|&v| self.left.is_boundary_vertex(v))
            || cell.right.vertices().iter().any(|&v| self.right.is_boundary_vertex(v))
    }
}
