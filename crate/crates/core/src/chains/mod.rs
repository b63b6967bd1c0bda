//! Uniformly finite chains and cochains with ℓ∞ control, the boundary and
//! coboundary operators, the degree-0 boundary problem at a capacity, and
//! the product splitting of chains.

mod capacity;
mod ez;
mod flow;

use std::collections::BTreeMap;
use std::fmt::Debug;

use num::Signed;
use serde::{Deserialize, Serialize};

pub use capacity::{
    capacity_profile, is_boundary_at_capacity, minimal_capacity, verify_witness, BoundaryDecision, BoundaryVerdict, ComponentDecision,
    MinimalCapacity,
};
pub use ez::{ez_assemble, ez_split, leibniz_boundary, Bigraded};
pub use flow::FlowNetwork;

use crate::complex::{CellComplex, SimplicialWindow, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Coefficient groups: ℤ and ℚ, each normed by absolute value.
pub trait Coefficient: Clone + Signed + PartialOrd + Debug {
    fn from_i64(v: i64) -> Self;
}

impl Coefficient for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl Coefficient for Rational {
    fn from_i64(v: i64) -> Self {
        crate::rational::int(v)
    }
}

fn sup_norm<'a, R: Coefficient + 'a>(values: impl Iterator<Item = &'a R>) -> R {
    values.map(R::abs).fold(R::zero(), |m, a| if a > m { a } else { m })
}

/// A finitely supported chain `Σ a_σ σ` of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain<C: Ord, R = i64> {
    degree: usize,
    coeffs: BTreeMap<C, R>,
}

/// A cochain, recorded by its nonzero values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain<C: Ord, R = i64> {
    degree: usize,
    values: BTreeMap<C, R>,
}

pub type UffChain = Chain<Simplex, i64>;
pub type UffCochain = Cochain<Simplex, i64>;

macro_rules! graded_common {
    ($ty:ident, $field:ident) => {
        impl<C: Ord + Clone + Debug, R: Coefficient> $ty<C, R> {
            pub fn zero(degree: usize) -> Self {
                Self { degree, $field: BTreeMap::new() }
            }

            /// Validates that every cell is a `degree`-cell of `complex`; drops zeros.
            pub fn new<X: CellComplex<Cell = C>>(
                complex: &X,
                degree: usize,
                entries: impl IntoIterator<Item = (C, R)>,
            ) -> Result<Self> {
                let mut map: BTreeMap<C, R> = BTreeMap::new();
                for (c, r) in entries {
                    if complex.cell_dim(&c) != degree || complex.index_of(&c).is_none() {
                        return Err(Error::Parse(format!("{c:?} is not a {degree}-cell of the complex")));
                    }
                    let e = map.entry(c).or_insert_with(R::zero);
                    *e = e.clone() + r;
                }
                map.retain(|_, v| !v.is_zero());
                Ok(Self { degree, $field: map })
            }

            /// Unit coefficient on a single cell.
            pub fn basis(degree: usize, cell: C) -> Self {
                Self { degree, $field: BTreeMap::from([(cell, R::one())]) }
            }

            pub fn degree(&self) -> usize {
                self.degree
            }

            pub fn get(&self, cell: &C) -> R {
                self.$field.get(cell).cloned().unwrap_or_else(R::zero)
            }

            pub fn iter(&self) -> impl Iterator<Item = (&C, &R)> {
                self.$field.iter()
            }

            pub fn support_len(&self) -> usize {
                self.$field.len()
            }

            pub fn is_zero(&self) -> bool {
                self.$field.is_empty()
            }

            /// ℓ∞ norm, recomputed from the coefficients.
            pub fn norm(&self) -> R {
                sup_norm(self.$field.values())
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.degree, other.degree, "adding chains of different degrees");
                let mut map = self.$field.clone();
                for (c, r) in &other.$field {
                    let e = map.entry(c.clone()).or_insert_with(R::zero);
                    *e = e.clone() + r.clone();
                }
                map.retain(|_, v| !v.is_zero());
                Self { degree: self.degree, $field: map }
            }

            pub fn neg(&self) -> Self {
                Self { degree: self.degree, $field: self.$field.iter().map(|(c, r)| (c.clone(), -r.clone())).collect() }
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.neg())
            }

            pub fn scale(&self, k: &R) -> Self {
                let mut map: BTreeMap<C, R> =
                    self.$field.iter().map(|(c, r)| (c.clone(), r.clone() * k.clone())).collect();
                map.retain(|_, v| !v.is_zero());
                Self { degree: self.degree, $field: map }
            }

            /// Keeps only the cells accepted by `keep`.
            pub fn restrict(&self, keep: impl Fn(&C) -> bool) -> Self {
                Self {
                    degree: self.degree,
                    $field: self.$field.iter().filter(|(c, _)| keep(c)).map(|(c, r)| (c.clone(), r.clone())).collect(),
                }
            }

            pub fn map_coefficients<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> $ty<C, S> {
                $ty::from_map(self.degree, self.$field.iter().map(|(c, r)| (c.clone(), f(r))).collect())
            }

            pub(crate) fn from_map(degree: usize, mut map: BTreeMap<C, R>) -> Self {
                map.retain(|_, v| !v.is_zero());
                Self { degree, $field: map }
            }

            /// Dense coefficient vector in the complex's cell order.
            pub fn to_dense<X: CellComplex<Cell = C>>(&self, complex: &X) -> Vec<R> {
                let mut v = vec![R::zero(); complex.count(self.degree)];
                for (c, r) in &self.$field {
                    v[complex.index_of(c).expect("cell of complex")] = r.clone();
                }
                v
            }

            pub fn from_dense<X: CellComplex<Cell = C>>(complex: &X, degree: usize, dense: &[R]) -> Self {
                let map = complex
                    .cells_or_empty(degree)
                    .iter()
                    .zip(dense)
                    .filter(|(_, r)| !r.is_zero())
                    .map(|(c, r)| (c.clone(), r.clone()))
                    .collect();
                Self { degree, $field: map }
            }
        }
    };
}

graded_common!(Chain, coeffs);
graded_common!(Cochain, values);

/// Simplicial boundary, extended linearly.
pub fn boundary<X: CellComplex, R: Coefficient>(complex: &X, chain: &Chain<X::Cell, R>) -> Result<Chain<X::Cell, R>> {
    if chain.degree == 0 {
        return Err(Error::DegreeZero);
    }
    let mut out: BTreeMap<X::Cell, R> = BTreeMap::new();
    for (cell, a) in &chain.coeffs {
        for (face, s) in complex.cell_boundary(cell) {
            let e = out.entry(face).or_insert_with(R::zero);
            *e = e.clone() + a.clone() * R::from_i64(s);
        }
    }
    Ok(Chain::from_map(chain.degree - 1, out))
}

/// Simplicial coboundary: `(δc)(τ) = c(∂τ)`.
pub fn coboundary<X: CellComplex, R: Coefficient>(complex: &X, cochain: &Cochain<X::Cell, R>) -> Cochain<X::Cell, R> {
    let q = cochain.degree;
    let matrix = complex.coboundary_matrix(q);
    let up = complex.cells_or_empty(q + 1);
    let mut out: BTreeMap<X::Cell, R> = BTreeMap::new();
    for (cell, a) in &cochain.values {
        let i = complex.index_of(cell).expect("cochain cell in complex");
        for &(r, s) in matrix.column(i) {
            let e = out.entry(up[r].clone()).or_insert_with(R::zero);
            *e = e.clone() + a.clone() * R::from_i64(s);
        }
    }
    Cochain::from_map(q + 1, out)
}

/// Evaluation `⟨c, b⟩`.
pub fn pairing<C: Ord + Clone + Debug, R: Coefficient>(cochain: &Cochain<C, R>, chain: &Chain<C, R>) -> R {
    if cochain.degree != chain.degree {
        return R::zero();
    }
    chain.iter().fold(R::zero(), |acc, (c, a)| acc + a.clone() * cochain.get(c))
}

/// Coefficient 1 on every interior vertex, 0 on the rim.
pub fn fundamental_class(window: &SimplicialWindow) -> UffChain {
    Chain::from_map(0, window.interior_vertices().map(|v| (Simplex::vertex(v), 1)).collect())
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    degree: usize,
    coeffs: Vec<(Vec<VertexId>, i64)>,
}

impl UffChain {
    /// `{"degree": q, "coeffs": [[[v, ...], a], ...]}`.
    pub fn to_json(&self) -> String {
        let doc = ChainJson {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(s, a)| (s.vertices().to_vec(), *a)).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("chain serializes")
    }

    /// Parses a chain; vertex lists may be unsorted, in which case the
    /// coefficient picks up the sign of the sorting permutation.
    pub fn from_json(window: &SimplicialWindow, text: &str) -> Result<Self> {
        let doc: ChainJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut entries = Vec::new();
        for (vs, a) in doc.coeffs {
            let oriented = crate::complex::OrientedSimplex::from_ordered(&vs)?;
            if oriented.simplex.dim() != doc.degree || !window.contains(&oriented.simplex) {
                return Err(Error::SupportOutsideWindow(oriented.simplex, doc.degree));
            }
            entries.push((oriented.simplex, a * oriented.orientation as i64));
        }
        Chain::new(window, doc.degree, entries)
    }
}

impl UffCochain {
    pub fn to_json(&self) -> String {
        let doc = ChainJson {
            degree: self.degree,
            coeffs: self.values.iter().map(|(s, a)| (s.vertices().to_vec(), *a)).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("cochain serializes")
    }
}
