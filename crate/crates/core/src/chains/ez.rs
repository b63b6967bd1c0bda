use std::collections::BTreeMap;

use super::Chain;
use crate::complex::{CellWindow, ProductCell, Simplex};
use crate::error::{Error, Result};

/// A chain on `X × Y` viewed as `⊕_{i+j=n} C_i(X; C_j(Y))`: for each
/// bidegree, an `X`-simplex maps to a `Y`-chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bigraded {
    degree: usize,
    pub components: BTreeMap<(usize, usize), BTreeMap<Simplex, BTreeMap<Simplex, i64>>>,
}

impl Bigraded {
    pub fn zero(degree: usize) -> Self {
        Self { degree, components: BTreeMap::new() }
    }

    pub fn total_degree(&self) -> usize {
        self.degree
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.components.keys().copied()
    }

    pub fn get(&self, left: &Simplex, right: &Simplex) -> i64 {
        self.components
            .get(&(left.dim(), right.dim()))
            .and_then(|m| m.get(left))
            .and_then(|m| m.get(right))
            .copied()
            .unwrap_or(0)
    }

    fn add(&mut self, left: Simplex, right: Simplex, value: i64) {
        let key = (left.dim(), right.dim());
        let slot = self.components.entry(key).or_default();
        let inner = slot.entry(left.clone()).or_default();
        let entry = inner.entry(right.clone()).or_insert(0);
        *entry += value;
        if *entry == 0 {
            inner.remove(&right);
            if inner.is_empty() {
                slot.remove(&left);
                if slot.is_empty() {
                    self.components.remove(&key);
                }
            }
        }
    }
}

pub fn ez_split(window: &CellWindow, c: &Chain<ProductCell>) -> Result<Bigraded> {
    let mut out = Bigraded::zero(c.degree());
    for (cell, &a) in c.iter() {
        if !window.contains(cell) {
            return Err(Error::NotAProductWindow(format!("{cell:?} is not a cell of the product")));
        }
        out.add(cell.left.clone(), cell.right.clone(), a);
    }
    Ok(out)
}

pub fn ez_assemble(b: &Bigraded) -> Chain<ProductCell> {
    let degree = b.degree;
    let map = b
        .components
        .values()
        .flat_map(|m| m.iter())
        .flat_map(|(l, inner)| inner.iter().map(move |(r, &a)| (ProductCell::new(l.clone(), r.clone()), a)))
        .collect();
    Chain::from_map(degree, map)
}

/// `∂ ⊗ 1 + (−1)^i 1 ⊗ ∂` on each bidegree `(i, j)`, computed on the
/// factors without going through product cells.
pub fn leibniz_boundary(b: &Bigraded) -> Bigraded {
    let mut out = Bigraded::zero(b.degree.saturating_sub(1));
    for (&(i, _), m) in &b.components {
        let twist = if i % 2 == 0 { 1 } else { -1 };
        for (l, inner) in m {
            for (r, &a) in inner {
                for (f, s) in l.facets() {
                    out.add(f, r.clone(), s * a);
                }
                for (f, s) in r.facets() {
                    out.add(l.clone(), f, twist * s * a);
                }
            }
        }
    }
    out
}
