use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use super::{CellComplex, SimplicialWindow, Simplex, Vertex, VertexId};
use crate::error::{Error, Result};
use crate::rational::{determinant, int, Rational};
use crate::sparse::SparseMatrix;

/// Where a vertex of a subdivision sits in the original window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrigin {
    /// Smallest old simplex containing the new vertex.
    pub carrier: Simplex,
    /// Barycentric weights over `carrier`'s vertices, in sorted order.
    pub weights: Vec<Rational>,
}

/// Chain-level record of a subdivision: each old `q`-simplex maps to the
/// signed sum of new `q`-simplices that tile it.
#[derive(Debug, Clone)]
pub struct SubdivisionMap {
    forward: BTreeMap<Simplex, Vec<(Simplex, i64)>>,
    vertex_origin: Vec<VertexOrigin>,
}

impl SubdivisionMap {
    pub fn image(&self, old: &Simplex) -> &[(Simplex, i64)] {
        self.forward.get(old).map_or(&[], Vec::as_slice)
    }

    pub fn vertex_origin(&self, v: VertexId) -> &VertexOrigin {
        &self.vertex_origin[v as usize]
    }

    pub fn vertex_origins(&self) -> &[VertexOrigin] {
        &self.vertex_origin
    }

    /// Matrix of the degree-`q` forward map, columns = old simplices.
    pub fn matrix(&self, q: usize, old: &SimplicialWindow, new: &SimplicialWindow) -> SparseMatrix {
        let mut entries = Vec::new();
        for (c, s) in old.simplices(q).iter().enumerate() {
            for (t, sign) in self.image(s) {
                let r = new.index_of(t).expect("image simplex in subdivision");
                entries.push((r, c, *sign));
            }
        }
        SparseMatrix::from_triplets(new.simplices(q).len(), old.simplices(q).len(), entries)
    }
}

fn carrier_matrix_row(origin: &VertexOrigin, carrier: &Simplex) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); carrier.vertices().len()];
    for (v, w) in origin.carrier.vertices().iter().zip(&origin.weights) {
        row[carrier.position(*v).expect("carrier of a face")] = w.clone();
    }
    row
}

fn compute_forward(new: &SimplicialWindow, origins: &[VertexOrigin]) -> BTreeMap<Simplex, Vec<(Simplex, i64)>> {
    let mut forward: BTreeMap<Simplex, Vec<(Simplex, i64)>> = BTreeMap::new();
    for t in new.all_simplices() {
        let carrier = t
            .vertices()
            .iter()
            .map(|&u| &origins[u as usize].carrier)
            .fold(None::<Simplex>, |acc, c| Some(acc.map_or_else(|| c.clone(), |a| a.join(c))))
            .expect("nonempty simplex");
        if carrier.dim() != t.dim() {
            continue;
        }
        let rows = t
            .vertices()
            .iter()
            .map(|&u| carrier_matrix_row(&origins[u as usize], &carrier))
            .collect();
        let det = determinant(rows);
        assert!(!det.is_zero(), "degenerate simplex {t} in subdivision");
        forward.entry(carrier).or_default().push((t.clone(), if det.is_positive() { 1 } else { -1 }));
    }
    forward
}

fn average(points: &[&[Rational]], weights: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); points[0].len()];
    for (p, w) in points.iter().zip(weights) {
        for (o, x) in out.iter_mut().zip(p.iter()) {
            *o += x * w;
        }
    }
    out
}

fn origin_vertex(window: &SimplicialWindow, id: VertexId, origin: &VertexOrigin) -> Vertex {
    let boundary = origin.carrier.vertices().iter().any(|&v| window.is_boundary_vertex(v));
    let pos = window.has_geometry().then(|| {
        let pts: Vec<&[Rational]> = origin
            .carrier
            .vertices()
            .iter()
            .map(|&v| window.position(v).expect("geometry"))
            .collect();
        average(&pts, &origin.weights)
    });
    Vertex { id, pos, boundary }
}

fn closed_levels(tops: impl IntoIterator<Item = Simplex>, dim: usize) -> Vec<Vec<Simplex>> {
    let mut levels: Vec<std::collections::BTreeSet<Simplex>> = vec![Default::default(); dim + 1];
    for t in tops {
        for f in t.faces() {
            let d = f.dim();
            levels[d].insert(f);
        }
    }
    levels.into_iter().map(|l| l.into_iter().collect()).collect()
}

/// One new vertex per simplex (its barycentre); new simplices are the flags
/// `σ₀ < σ₁ < … < σₘ`. A barycentre is rim-flagged when its simplex has a
/// rim vertex.
pub fn barycentric_subdivide(window: &SimplicialWindow) -> (SimplicialWindow, SubdivisionMap) {
    let offsets = barycenter_offsets(window);
    let total = window.num_simplices();
    let id_of = |s: &Simplex| -> VertexId {
        (offsets[s.dim()] + window.index_of(s).expect("simplex of window")) as VertexId
    };
    let mut origins = Vec::with_capacity(total);
    for q in 0..=window.dim() {
        for s in window.simplices(q) {
            let w = Rational::new(One::one(), num::BigInt::from(q + 1));
            origins.push(VertexOrigin { carrier: s.clone(), weights: vec![w; q + 1] });
        }
    }
    let vertices: Vec<Vertex> = origins
        .iter()
        .enumerate()
        .map(|(i, o)| origin_vertex(window, i as VertexId, o))
        .collect();

    let mut tops = Vec::new();
    for m in window.maximal_simplices() {
        for perm in permutations(m.vertices()) {
            let flag: Vec<VertexId> = (0..perm.len())
                .map(|i| {
                    let mut prefix = perm[..=i].to_vec();
                    prefix.sort_unstable();
                    id_of(&Simplex::from_sorted(prefix))
                })
                .collect();
            tops.push(Simplex::from_sorted(flag));
        }
    }
    let new = SimplicialWindow::assemble(vertices, closed_levels(tops, window.dim()), None);
    let forward = compute_forward(&new, &origins);
    (new, SubdivisionMap { forward, vertex_origin: origins })
}

/// The regular (edgewise) subdivision: vertices `p_ij = (p_i + p_j)/2`; the
/// simplices are sequences `(a₀,b₀) … (a_r,b_r)` of index pairs `a ≤ b`,
/// non-decreasing in both entries, with every `a` at most every `b`.
/// Old vertices keep their ids; edge midpoints follow in edge order.
pub fn standard_subdivide(window: &SimplicialWindow) -> Result<(SimplicialWindow, SubdivisionMap)> {
    if !window.has_geometry() {
        return Err(Error::MissingGeometry);
    }
    let n = window.num_vertices();
    let mut origins: Vec<VertexOrigin> = (0..n as VertexId)
        .map(|v| VertexOrigin { carrier: Simplex::vertex(v), weights: vec![int(1)] })
        .collect();
    let half = Rational::new(One::one(), num::BigInt::from(2));
    for e in window.simplices(1) {
        origins.push(VertexOrigin { carrier: e.clone(), weights: vec![half.clone(), half.clone()] });
    }
    let vertices: Vec<Vertex> = origins
        .iter()
        .enumerate()
        .map(|(i, o)| origin_vertex(window, i as VertexId, o))
        .collect();
    let midpoint = |a: VertexId, b: VertexId| -> VertexId {
        if a == b {
            a
        } else {
            let e = Simplex::from_sorted(vec![a, b]);
            (n + window.simplices(1).binary_search(&e).expect("edge of window")) as VertexId
        }
    };

    let mut tops = Vec::new();
    for m in window.maximal_simplices() {
        let vs = m.vertices();
        for seq in edgewise_sequences(m.dim()) {
            let mut ids: Vec<VertexId> = seq.iter().map(|&(a, b)| midpoint(vs[a], vs[b])).collect();
            ids.sort_unstable();
            tops.push(Simplex::from_sorted(ids));
        }
    }
    let new = SimplicialWindow::assemble(vertices, closed_levels(tops, window.dim()), None);
    let forward = compute_forward(&new, &origins);
    Ok((new, SubdivisionMap { forward, vertex_origin: origins }))
}

/// Barycentre of the `i`-th `q`-simplex gets id `offsets[q] + i`.
pub(crate) fn barycenter_offsets(window: &SimplicialWindow) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(window.dim() + 1);
    let mut total = 0usize;
    for q in 0..=window.dim() {
        offsets.push(total);
        total += window.simplices(q).len();
    }
    offsets
}

/// Maximal sequences for a `dim`-simplex.
fn edgewise_sequences(dim: usize) -> Vec<Vec<(usize, usize)>> {
    fn extend(dim: usize, seq: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if seq.len() == dim + 1 {
            out.push(seq.clone());
            return;
        }
        let &(a0, b0) = seq.last().expect("seeded");
        let b_first = seq[0].1;
        for a in a0..=dim {
            for b in b0.max(a)..=dim {
                if (a, b) == (a0, b0) || a > b_first {
                    continue;
                }
                seq.push((a, b));
                extend(dim, seq, out);
                seq.pop();
            }
        }
    }
    let mut out = Vec::new();
    for a in 0..=dim {
        for b in a..=dim {
            let mut seq = vec![(a, b)];
            extend(dim, &mut seq, &mut out);
        }
    }
    out
}

fn permutations(items: &[VertexId]) -> Vec<Vec<VertexId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Squared Euclidean length of an edge, exact.
pub fn edge_length_squared(window: &SimplicialWindow, edge: &Simplex) -> Option<Rational> {
    let [a, b] = edge.vertices() else { return None };
    let (pa, pb) = (window.position(*a)?, window.position(*b)?);
    Some(pa.iter().zip(pb).map(|(x, y)| (x - y) * (x - y)).fold(Rational::zero(), |s, d| s + d))
}
