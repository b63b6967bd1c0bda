use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{CellComplex, MatrixCache, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::rational::{serde_position, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    #[serde(with = "serde_position")]
    pub pos: Option<Vec<Rational>>,
    pub boundary: bool,
}

impl Vertex {
    pub fn abstract_vertex(id: VertexId, boundary: bool) -> Self {
        Self { id, pos: None, boundary }
    }
}

/// Which generator produced a window, and with which integer parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub generator: String,
    pub params: BTreeMap<String, i64>,
}

/// A finite window of a bounded-geometry complex. Vertices carry a rim
/// flag; vertex ids are dense (`id == index`).
#[derive(Debug, Clone)]
pub struct SimplicialWindow {
    dim: usize,
    vertices: Vec<Vertex>,
    simplices: Vec<Vec<Simplex>>,
    link_bound: usize,
    meta: Option<Metadata>,
    cache: MatrixCache,
}

impl PartialEq for SimplicialWindow {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.vertices == other.vertices
            && self.simplices == other.simplices
            && self.link_bound == other.link_bound
            && self.meta == other.meta
    }
}

/// Validates the input, completes the face closure and computes the link bound.
pub fn build_window(vertices: Vec<Vertex>, simplices: Vec<Vec<VertexId>>) -> Result<SimplicialWindow> {
    for (i, v) in vertices.iter().enumerate() {
        if v.id as usize != i {
            return Err(Error::BadVertexIds(v.id));
        }
    }
    let geo_dim = vertices.first().and_then(|v| v.pos.as_ref().map(Vec::len));
    for v in &vertices {
        if v.pos.as_ref().map(Vec::len) != geo_dim {
            return Err(Error::BadPosition(v.id));
        }
    }
    let mut seen = BTreeSet::new();
    let mut maximal = Vec::with_capacity(simplices.len());
    for raw in simplices {
        let s = Simplex::new(raw)?;
        if let Some(&v) = s.vertices().iter().find(|&&v| v as usize >= vertices.len()) {
            return Err(Error::UnknownVertex(v));
        }
        if !seen.insert(s.clone()) {
            return Err(Error::DuplicateSimplex(s));
        }
        maximal.push(s);
    }
    let dim = maximal.iter().map(Simplex::dim).max().unwrap_or(0);
    let mut levels: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 1];
    for v in 0..vertices.len() {
        levels[0].insert(Simplex::vertex(v as VertexId));
    }
    for s in &maximal {
        if levels[s.dim()].contains(s) {
            continue;
        }
        for f in s.faces() {
            let d = f.dim();
            levels[d].insert(f);
        }
    }
    Ok(SimplicialWindow::assemble(
        vertices,
        levels.into_iter().map(|l| l.into_iter().collect()).collect(),
        None,
    ))
}

impl SimplicialWindow {
    /// `simplices` must already be closed and sorted per dimension.
    pub(crate) fn assemble(vertices: Vec<Vertex>, mut simplices: Vec<Vec<Simplex>>, meta: Option<Metadata>) -> Self {
        while simplices.len() > 1 && simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        if simplices.is_empty() {
            simplices.push(Vec::new());
        }
        let dim = simplices.len() - 1;
        let mut containing = vec![0usize; vertices.len()];
        for level in &simplices {
            for s in level {
                for &v in s.vertices() {
                    containing[v as usize] += 1;
                }
            }
        }
        let link_bound = containing.iter().map(|c| c.saturating_sub(1)).max().unwrap_or(0);
        Self { dim, vertices, simplices, link_bound, meta, cache: MatrixCache::new(dim) }
    }

    pub fn with_metadata(mut self, meta: Metadata) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v as usize]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn simplices(&self, q: usize) -> &[Simplex] {
        self.simplices.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    pub fn num_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn link_bound(&self) -> usize {
        self.link_bound
    }

    pub fn metadata(&self) -> Option<&Metadata> {
        self.meta.as_ref()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices(s.dim()).binary_search(s).is_ok()
    }

    pub fn has_geometry(&self) -> bool {
        self.vertices.first().is_some_and(|v| v.pos.is_some())
    }

    pub fn position(&self, v: VertexId) -> Option<&[Rational]> {
        self.vertices[v as usize].pos.as_deref()
    }

    pub fn is_boundary_vertex(&self, v: VertexId) -> bool {
        self.vertices[v as usize].boundary
    }

    /// A simplex is interior when none of its vertices is rim-flagged.
    pub fn is_interior(&self, s: &Simplex) -> bool {
        s.vertices().iter().all(|&v| !self.is_boundary_vertex(v))
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().filter(|v| !v.boundary).map(|v| v.id)
    }

    /// `(q+1)`-simplices having `s` as a facet.
    pub fn cofaces(&self, s: &Simplex) -> Vec<Simplex> {
        let coboundary = self.coboundary_matrix(s.dim());
        let Some(i) = self.index_of(s) else { return Vec::new() };
        coboundary
            .column(i)
            .iter()
            .map(|&(r, _)| self.simplices(s.dim() + 1)[r].clone())
            .collect()
    }

    /// Simplices with no proper coface.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for q in 0..=self.dim {
            let cob = self.coboundary_matrix(q);
            for (i, s) in self.simplices(q).iter().enumerate() {
                if q == self.dim || cob.column(i).is_empty() {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    fn require(&self, s: &Simplex) -> Result<()> {
        if self.contains(s) { Ok(()) } else { Err(Error::UnknownSimplex(s.clone())) }
    }

    /// `{ τ : σ ∪ τ ∈ K }`, which is closed under faces.
    pub fn star(&self, sigma: &Simplex) -> Result<SubComplex> {
        self.require(sigma)?;
        Ok(self.collect_sub(|t| self.contains(&sigma.join(t))))
    }

    /// `{ τ : σ ∪ τ ∈ K, σ ∩ τ = ∅ }`.
    pub fn link(&self, sigma: &Simplex) -> Result<SubComplex> {
        self.require(sigma)?;
        Ok(self.collect_sub(|t| t.is_disjoint(sigma) && self.contains(&sigma.join(t))))
    }

    fn collect_sub(&self, keep: impl Fn(&Simplex) -> bool) -> SubComplex {
        SubComplex {
            simplices: self
                .simplices
                .iter()
                .map(|level| level.iter().filter(|t| keep(t)).cloned().collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = WindowJson {
            dim: self.dim,
            link_bound: self.link_bound,
            vertices: self.vertices.clone(),
            simplices: self
                .simplices
                .iter()
                .enumerate()
                .map(|(q, level)| (q, level.iter().map(|s| s.vertices().to_vec()).collect()))
                .collect(),
            meta: self.meta.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("window serializes")
    }

    /// Parses and re-validates; the recorded `dim` and `link_bound` must match.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: WindowJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let listed: Vec<Vec<VertexId>> = doc
            .simplices
            .into_iter()
            .filter(|(q, _)| *q > 0)
            .flat_map(|(_, level)| level)
            .collect();
        let mut w = build_window(doc.vertices, listed)?;
        if w.dim != doc.dim || w.link_bound != doc.link_bound {
            return Err(Error::Parse(format!(
                "recorded dim/link_bound ({}, {}) disagree with computed ({}, {})",
                doc.dim, doc.link_bound, w.dim, w.link_bound
            )));
        }
        w.meta = doc.meta;
        Ok(w)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowJson {
    dim: usize,
    link_bound: usize,
    vertices: Vec<Vertex>,
    simplices: BTreeMap<usize, Vec<Vec<VertexId>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Metadata>,
}

impl CellComplex for SimplicialWindow {
    type Cell = Simplex;

    fn top_dim(&self) -> usize {
        self.dim
    }

    fn cells(&self, q: usize) -> &[Simplex] {
        self.simplices(q)
    }

    fn cell_dim(&self, cell: &Simplex) -> usize {
        cell.dim()
    }

    fn cell_boundary(&self, cell: &Simplex) -> Vec<(Simplex, i64)> {
        cell.facets().collect()
    }

    fn matrix_cache(&self) -> &MatrixCache {
        &self.cache
    }

    fn touches_boundary(&self, cell: &Simplex) -> bool {
        !self.is_interior(cell)
    }
}

/// A set of simplices of a window, in the window's vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubComplex {
    simplices: Vec<Vec<Simplex>>,
}

impl SubComplex {
    pub fn simplices(&self, q: usize) -> &[Simplex] {
        self.simplices.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices(s.dim()).binary_search(s).is_ok()
    }

    /// Counts per dimension, trailing empty dimensions dropped.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self.simplices.iter().map(Vec::len).collect();
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abstract_vertices(n: u32) -> Vec<Vertex> {
        (0..n).map(|i| Vertex::abstract_vertex(i, false)).collect()
    }

    /// Six triangles around vertex 0, rim vertices 1..=6 flagged.
    fn hex_fan() -> SimplicialWindow {
        let mut vs = abstract_vertices(7);
        for v in vs.iter_mut().skip(1) {
            v.boundary = true;
        }
        let tris = (1..=6).map(|i| vec![0, i, i % 6 + 1]).collect();
        build_window(vs, tris).unwrap()
    }

    fn tetra_boundary() -> SimplicialWindow {
        build_window(abstract_vertices(4), vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn single_edge() {
        let w = build_window(abstract_vertices(2), vec![vec![0, 1]]).unwrap();
        assert_eq!(w.num_vertices(), 2);
        assert_eq!(w.simplices(1).len(), 1);
        assert_eq!(w.link_bound(), 1);
        assert_eq!(w.dim(), 1);
    }

    #[test]
    fn tetrahedron_boundary_closure_and_links() {
        let w = tetra_boundary();
        assert_eq!(w.simplices(0).len(), 4);
        assert_eq!(w.simplices(1).len(), 6);
        assert_eq!(w.simplices(2).len(), 4);
        // Hand enumeration: the link of a vertex is a triangle boundary.
        for v in 0..4 {
            let link = w.link(&Simplex::vertex(v)).unwrap();
            assert_eq!(link.f_vector(), vec![3, 3]);
        }
        assert_eq!(w.link_bound(), 6);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            build_window(abstract_vertices(3), vec![vec![0, 1, 2], vec![0, 0]]),
            Err(Error::NonSimplicial(vec![0, 0]))
        );
        assert!(matches!(
            build_window(abstract_vertices(3), vec![vec![0, 1], vec![1, 0]]),
            Err(Error::DuplicateSimplex(_))
        ));
        assert_eq!(build_window(abstract_vertices(2), vec![vec![0, 5]]), Err(Error::UnknownVertex(5)));
    }

    #[test]
    fn star_and_link_in_hex_fan() {
        let w = hex_fan();
        let centre = Simplex::vertex(0);
        let link = w.link(&centre).unwrap();
        assert_eq!(link.f_vector(), vec![6, 6]);
        for i in 1..=6u32 {
            let e = Simplex::new(vec![i, i % 6 + 1]).unwrap();
            assert!(link.contains(&e));
        }
        assert!(!link.contains(&centre));
        let star = w.star(&centre).unwrap();
        assert_eq!(star.len(), w.num_simplices());
        let tri = Simplex::new(vec![0, 1, 2]).unwrap();
        assert!(w.link(&tri).unwrap().is_empty());
        assert!(matches!(w.star(&Simplex::new(vec![1, 3]).unwrap()), Err(Error::UnknownSimplex(_))));
    }

    #[test]
    fn json_round_trip_is_byte_exact() {
        let mut vs = abstract_vertices(3);
        vs[0].pos = Some(vec![crate::rational::ratio(1, 2), crate::rational::int(0)]);
        vs[1].pos = Some(vec![crate::rational::int(1), crate::rational::int(0)]);
        vs[2].pos = Some(vec![crate::rational::int(0), crate::rational::ratio(-3, 4)]);
        vs[2].boundary = true;
        let w = build_window(vs, vec![vec![0, 1, 2]]).unwrap();
        let text = w.to_json();
        assert!(text.contains("\"1/2\""));
        let back = SimplicialWindow::from_json(&text).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_rejects_wrong_link_bound() {
        let w = tetra_boundary();
        let text = w.to_json().replace("\"link_bound\": 6", "\"link_bound\": 5");
        assert!(matches!(SimplicialWindow::from_json(&text), Err(Error::Parse(_))));
    }
}
