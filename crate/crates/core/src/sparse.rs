//! Column-major sparse integer matrices, just enough for boundary operators.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    /// Per column: sorted `(row, value)` pairs with nonzero values.
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Builds from triplets; duplicate entries are summed.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            *acc[c].entry(r).or_insert(0) += v;
        }
        let columns = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect();
        Self { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, i64)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c]
            .binary_search_by_key(&r, |&(row, _)| row)
            .map_or(0, |i| self.columns[c][i].1)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v)))
    }

    /// `self * other`, exact.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut entries = Vec::new();
        for (c, col) in other.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, b) in col {
                for &(r, a) in &self.columns[k] {
                    *acc.entry(r).or_insert(0) += a * b;
                }
            }
            entries.extend(acc.into_iter().map(|(r, v)| (r, c, v)));
        }
        SparseMatrix::from_triplets(self.rows, other.cols, entries)
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            if x[c] == 0 {
                continue;
            }
            for &(r, v) in col {
                y[r] += v * x[c];
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_dense() {
        let a = SparseMatrix::from_triplets(2, 3, [(0, 0, 1), (0, 2, -2), (1, 1, 3)]);
        let b = SparseMatrix::from_triplets(3, 2, [(0, 0, 4), (1, 1, 5), (2, 0, 1), (2, 1, 1)]);
        let p = a.mul(&b);
        assert_eq!(p.get(0, 0), 2);
        assert_eq!(p.get(0, 1), -2);
        assert_eq!(p.get(1, 0), 0);
        assert_eq!(p.get(1, 1), 15);
        assert_eq!(a.transpose().get(2, 0), -2);
        assert_eq!(a.mul_vec(&[1, 1, 1]), vec![-1, 3]);
    }

    #[test]
    fn duplicates_cancel() {
        let m = SparseMatrix::from_triplets(1, 1, [(0, 0, 2), (0, 0, -2)]);
        assert!(m.is_zero());
        assert_eq!(m.nnz(), 0);
    }
}
