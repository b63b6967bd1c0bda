use std::collections::{BTreeMap, VecDeque};

use super::subdivide::barycenter_offsets;
use super::{barycentric_subdivide, permutation_sign, CellComplex, SimplicialWindow, Simplex, VertexId};
use crate::error::{Error, Result};

/// Signs of the top simplices relative to their sorted vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    signs: BTreeMap<Simplex, i8>,
}

impl Orientation {
    /// Propagates a coherent orientation across codimension-1 faces shared by
    /// exactly two top simplices. Only interior faces are required to have
    /// two cofaces.
    pub fn compute(window: &SimplicialWindow) -> Result<Self> {
        let n = window.dim();
        let tops = window.simplices(n);
        if n == 0 {
            return Ok(Self { signs: tops.iter().map(|s| (s.clone(), 1)).collect() });
        }
        let cob = window.coboundary_matrix(n - 1);
        for (i, f) in window.simplices(n - 1).iter().enumerate() {
            let k = cob.column(i).len();
            if window.is_interior(f) && k != 2 {
                return Err(Error::NotManifoldLike { simplex: f.clone(), cofaces: k });
            }
        }
        // Adjacency between top simplices via faces with two cofaces.
        let mut adj: Vec<Vec<(usize, i64, usize)>> = vec![Vec::new(); tops.len()];
        for i in 0..window.simplices(n - 1).len() {
            if let [(a, ea), (b, eb)] = cob.column(i) {
                adj[*a].push((*b, ea * eb, i));
                adj[*b].push((*a, ea * eb, i));
            }
        }
        let mut sign = vec![0i8; tops.len()];
        for seed in 0..tops.len() {
            if sign[seed] != 0 {
                continue;
            }
            sign[seed] = 1;
            let mut queue = VecDeque::from([seed]);
            while let Some(t) = queue.pop_front() {
                for &(u, prod, face) in &adj[t] {
                    // s_t [t:F] = -s_u [u:F]
                    let want = -(sign[t] as i64 * prod) as i8;
                    if sign[u] == 0 {
                        sign[u] = want;
                        queue.push_back(u);
                    } else if sign[u] != want {
                        return Err(Error::NotOrientable(window.simplices(n - 1)[face].clone()));
                    }
                }
            }
        }
        Ok(Self { signs: tops.iter().cloned().zip(sign).collect() })
    }

    pub fn sign(&self, top: &Simplex) -> i8 {
        self.signs.get(top).copied().unwrap_or(1)
    }

    /// Reverses one top simplex, for fault injection.
    pub fn flip(&mut self, top: &Simplex) {
        if let Some(s) = self.signs.get_mut(top) {
            *s = -*s;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, i8)> {
        self.signs.iter().map(|(s, &v)| (s, v))
    }
}

/// The dual cell `D(σ)`: the signed sum of barycentric simplices
/// `σ̂ σ̂₁ … σ̂ₚ` over full flags `σ < σ₁ < … < σₚ` reaching a top simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCell {
    pub dual_dim: usize,
    /// Whether the whole star of σ lies in the window.
    pub complete: bool,
    /// Chain in the barycentric subdivision.
    pub chain: BTreeMap<Simplex, i64>,
}

/// `∂D(σ) = Σ λ_ρ D(ρ) + residual` over the cofaces ρ of σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualBoundary {
    pub terms: Vec<(Simplex, i64)>,
    pub residual: BTreeMap<Simplex, i64>,
}

#[derive(Debug, Clone)]
pub struct DualCellComplex {
    base: SimplicialWindow,
    barycentric: SimplicialWindow,
    orientation: Orientation,
    cells: BTreeMap<Simplex, DualCell>,
}

/// Dual cells of an oriented window that is a combinatorial manifold on its
/// interior. Each `D(σ)` is oriented so that a frame of `D(σ)` followed by
/// a frame of `σ` is positive in the ambient orientation; with this choice
/// the coefficient of `D(σ)` in `∂D(τ)` is `(−1)^{n−k+1} [σ:τ]`, `k = dim σ`.
pub fn dual_complex(window: &SimplicialWindow) -> Result<DualCellComplex> {
    let orientation = Orientation::compute(window)?;
    Ok(dual_complex_with_orientation(window, orientation))
}

/// As [`dual_complex`] with a caller-supplied orientation, which is not
/// checked for coherence.
pub fn dual_complex_with_orientation(window: &SimplicialWindow, orientation: Orientation) -> DualCellComplex {
    let n = window.dim();
    let offsets = barycenter_offsets(window);
    let bary_id = |s: &Simplex| -> VertexId { (offsets[s.dim()] + window.index_of(s).expect("simplex")) as VertexId };
    let (barycentric, _) = barycentric_subdivide(window);

    let mut cells = BTreeMap::new();
    for sigma in window.all_simplices() {
        let k = sigma.dim();
        // Moving the k vectors of σ past the n − k vectors of D(σ).
        let swap = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
        let mut chain = BTreeMap::new();
        // Walk flags upward; `order` is σ's sorted vertices followed by the
        // vertices added at each step.
        let mut stack = vec![(sigma.clone(), vec![bary_id(sigma)], sigma.vertices().to_vec())];
        while let Some((top, ids, order)) = stack.pop() {
            if top.dim() == n {
                let sign = swap * orientation.sign(&top) as i64 * permutation_sign(&order) as i64;
                *chain.entry(Simplex::from_sorted(ids)).or_insert(0) += sign;
                continue;
            }
            for up in window.cofaces(&top) {
                let added = *up.vertices().iter().find(|v| !top.contains_vertex(**v)).expect("coface adds a vertex");
                let mut ids = ids.clone();
                ids.push(bary_id(&up));
                let mut order = order.clone();
                order.push(added);
                stack.push((up, ids, order));
            }
        }
        chain.retain(|_, v| *v != 0);
        cells.insert(
            sigma.clone(),
            DualCell { dual_dim: n - sigma.dim(), complete: window.is_interior(sigma), chain },
        );
    }
    DualCellComplex { base: window.clone(), barycentric, orientation, cells }
}

impl DualCellComplex {
    pub fn base(&self) -> &SimplicialWindow {
        &self.base
    }

    pub fn barycentric(&self) -> &SimplicialWindow {
        &self.barycentric
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn cell(&self, sigma: &Simplex) -> Option<&DualCell> {
        self.cells.get(sigma)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Simplex, &DualCell)> {
        self.cells.iter()
    }

    /// Boundary of the barycentric chain `D(σ)`.
    pub fn chain_boundary(&self, sigma: &Simplex) -> BTreeMap<Simplex, i64> {
        let mut out = BTreeMap::new();
        for (t, c) in &self.cells[sigma].chain {
            for (f, s) in t.facets() {
                *out.entry(f).or_insert(0) += c * s;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Expresses `∂D(σ)` in the dual cells of the cofaces of σ.
    pub fn dual_boundary(&self, sigma: &Simplex) -> DualBoundary {
        let mut residual = self.chain_boundary(sigma);
        let mut terms = Vec::new();
        for rho in self.base.cofaces(sigma) {
            let cell = &self.cells[&rho];
            let Some((t, c)) = cell.chain.iter().next() else { continue };
            let lambda = residual.get(t).copied().unwrap_or(0) * c;
            if lambda != 0 {
                for (t, c) in &cell.chain {
                    let e = residual.entry(t.clone()).or_insert(0);
                    *e -= lambda * c;
                }
                residual.retain(|_, v| *v != 0);
                terms.push((rho.clone(), lambda));
            }
        }
        DualBoundary { terms, residual }
    }
}
