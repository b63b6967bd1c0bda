use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;

/// An unoriented simplex, stored as its strictly increasing vertex list.
/// Orientation lives in chain coefficients; see [`OrientedSimplex`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts the vertex list; rejects repeated vertices.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Parse("empty simplex".into()));
        }
        let raw = vertices.clone();
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NonSimplicial(raw));
        }
        Ok(Self(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Self(vertices)
    }

    pub fn vertex(v: VertexId) -> Self {
        Self(vec![v])
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains_vertex(*v))
    }

    /// Codimension-1 faces with their incidence signs `(-1)^i`.
    pub fn facets(&self) -> impl Iterator<Item = (Simplex, i64)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            (Simplex(v), if i % 2 == 0 { 1 } else { -1 })
        })
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }

    /// The simplex spanned by the union of both vertex sets.
    pub fn join(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<_> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        !self.0.iter().any(|v| other.contains_vertex(*v))
    }

    /// Local position of a vertex within the sorted list.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A simplex together with a sign relative to its sorted vertex order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedSimplex {
    pub simplex: Simplex,
    pub orientation: i8,
}

impl OrientedSimplex {
    /// Orients by the given vertex order: the sign is the parity of the
    /// permutation that sorts it.
    pub fn from_ordered(vertices: &[VertexId]) -> Result<Self> {
        let simplex = Simplex::new(vertices.to_vec())?;
        Ok(Self { orientation: permutation_sign(vertices), simplex })
    }
}

/// Sign of the permutation that sorts `seq` (distinct entries assumed).
pub fn permutation_sign<T: Ord>(seq: &[T]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 { 1 } else { -1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_rejects_repeats() {
        assert_eq!(Simplex::new(vec![2, 0, 1]).unwrap().vertices(), &[0, 1, 2]);
        assert_eq!(Simplex::new(vec![0, 0]), Err(Error::NonSimplicial(vec![0, 0])));
    }

    #[test]
    fn facets_alternate() {
        let s = Simplex::new(vec![0, 1, 2]).unwrap();
        let f: Vec<_> = s.facets().collect();
        assert_eq!(f[0], (Simplex::from_sorted(vec![1, 2]), 1));
        assert_eq!(f[1], (Simplex::from_sorted(vec![0, 2]), -1));
        assert_eq!(f[2], (Simplex::from_sorted(vec![0, 1]), 1));
        assert_eq!(Simplex::vertex(3).facets().count(), 0);
        assert_eq!(s.faces().len(), 7);
    }

    #[test]
    fn orientation_parity() {
        assert_eq!(OrientedSimplex::from_ordered(&[1, 0]).unwrap().orientation, -1);
        assert_eq!(OrientedSimplex::from_ordered(&[2, 0, 1]).unwrap().orientation, 1);
        assert_eq!(permutation_sign(&[0, 2, 1, 3]), -1);
    }
}
