use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{boundary, fundamental_class, Chain, FlowNetwork, UffChain};
use crate::complex::{SimplicialWindow, Simplex, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryVerdict {
    /// `witness` is a 1-chain with `‖witness‖∞ ≤ capacity` whose boundary
    /// agrees with the query on every interior vertex.
    IsBoundaryWithCapacity { capacity: i64, witness: UffChain },
    NoWitnessAtCapacity { capacity: i64 },
}

impl BoundaryVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, BoundaryVerdict::IsBoundaryWithCapacity { .. })
    }

    pub fn capacity(&self) -> i64 {
        match self {
            BoundaryVerdict::IsBoundaryWithCapacity { capacity, .. } | BoundaryVerdict::NoWitnessAtCapacity { capacity } => *capacity,
        }
    }

    pub fn witness(&self) -> Option<&UffChain> {
        match self {
            BoundaryVerdict::IsBoundaryWithCapacity { witness, .. } => Some(witness),
            BoundaryVerdict::NoWitnessAtCapacity { .. } => None,
        }
    }
}

/// Decision for one connected component of the interior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentDecision {
    pub vertices: usize,
    pub touches_rim: bool,
    /// Net demand `Σ c(v)` over the component.
    pub demand: i64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDecision {
    pub verdict: BoundaryVerdict,
    pub components: Vec<ComponentDecision>,
}

/// Least feasible capacity, or infeasible all the way up to the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum MinimalCapacity {
    Exact(i64),
    NoneBelow(i64),
}

impl MinimalCapacity {
    pub fn exact(self) -> Option<i64> {
        match self {
            MinimalCapacity::Exact(k) => Some(k),
            MinimalCapacity::NoneBelow(_) => None,
        }
    }
}

fn interior_components(window: &SimplicialWindow, adjacency: &[Vec<VertexId>]) -> Vec<Vec<VertexId>> {
    let mut comp = vec![usize::MAX; window.num_vertices()];
    let mut out = Vec::new();
    for start in window.interior_vertices() {
        if comp[start as usize] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start as usize] = id;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            i += 1;
            for &v in &adjacency[u as usize] {
                if !window.is_boundary_vertex(v) && comp[v as usize] == usize::MAX {
                    comp[v as usize] = id;
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Decides whether some 1-chain `b` with `|b_e| ≤ capacity` satisfies
/// `(∂b)(v) = c(v)` at every interior vertex. Rim vertices are free: as one
/// merged node they absorb or emit whatever flux keeps the total balanced.
/// Each interior component is an independent integer flow problem.
pub fn is_boundary_at_capacity(window: &SimplicialWindow, c: &UffChain, capacity: i64) -> Result<BoundaryDecision> {
    if c.degree() != 0 {
        return Err(Error::Parse(format!("degree-0 chain expected, got degree {}", c.degree())));
    }
    if capacity < 0 {
        return Err(Error::Parse("capacity must be non-negative".into()));
    }
    let mut adjacency: Vec<Vec<VertexId>> = vec![Vec::new(); window.num_vertices()];
    for e in window.simplices(1) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        adjacency[a as usize].push(b);
        adjacency[b as usize].push(a);
    }
    let demand = |v: VertexId| c.get(&Simplex::vertex(v));

    let mut witness: BTreeMap<Simplex, i64> = BTreeMap::new();
    let mut components = Vec::new();
    for members in interior_components(window, &adjacency) {
        let local: BTreeMap<VertexId, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rim = members.len();
        let (source, sink) = (rim + 1, rim + 2);
        let mut net = FlowNetwork::new(rim + 3);
        let mut arcs = Vec::new();
        let mut touches_rim = false;
        for &u in &members {
            for &v in &adjacency[u as usize] {
                let (lu, lv) = match local.get(&v) {
                    Some(&lv) if u < v => (local[&u], lv),
                    Some(_) => continue,
                    None => {
                        touches_rim = true;
                        (local[&u], rim)
                    }
                };
                let fwd = net.add_arc(lu, lv, capacity);
                let back = net.add_arc(lv, lu, capacity);
                arcs.push((u, v, fwd, back));
            }
        }
        let mut supply = 0i64;
        let mut total = 0i64;
        for &v in &members {
            let d = demand(v);
            total += d;
            if d > 0 {
                net.add_arc(local[&v], sink, d);
            } else if d < 0 {
                net.add_arc(source, local[&v], -d);
                supply -= d;
            }
        }
        let feasible = if total != 0 && !touches_rim {
            false
        } else {
            if total > 0 {
                net.add_arc(source, rim, total);
                supply += total;
            } else if total < 0 {
                net.add_arc(rim, sink, -total);
            }
            net.max_flow(source, sink) == supply
        };
        if feasible {
            for (u, v, fwd, back) in arcs {
                // Net flow u → v on the edge, oriented by sorted order.
                let f = net.flow(fwd) - net.flow(back);
                let (edge, sign) = if u < v { (vec![u, v], 1) } else { (vec![v, u], -1) };
                if f != 0 {
                    *witness.entry(Simplex::from_sorted(edge)).or_insert(0) += sign * f;
                }
            }
        }
        components.push(ComponentDecision { vertices: members.len(), touches_rim, demand: total, feasible });
    }
    let verdict = if components.iter().all(|c| c.feasible) {
        BoundaryVerdict::IsBoundaryWithCapacity { capacity, witness: Chain::from_map(1, witness) }
    } else {
        BoundaryVerdict::NoWitnessAtCapacity { capacity }
    };
    Ok(BoundaryDecision { verdict, components })
}

/// Checks a witness independently of how it was found.
pub fn verify_witness(window: &SimplicialWindow, c: &UffChain, witness: &UffChain, capacity: i64) -> bool {
    if witness.degree() != 1 || witness.norm() > capacity || witness.iter().any(|(s, _)| !window.contains(s)) {
        return false;
    }
    let Ok(db) = boundary(window, witness) else { return false };
    window.interior_vertices().all(|v| {
        let s = Simplex::vertex(v);
        db.get(&s) == c.get(&s)
    })
}

/// Least capacity `K ≤ k_max` at which `c` bounds, by doubling then
/// bisection over the monotone decision. The zero class has `K* = 0`.
pub fn minimal_capacity(window: &SimplicialWindow, c: &UffChain, k_max: i64) -> Result<(MinimalCapacity, Option<UffChain>)> {
    let interior = c.restrict(|s| window.is_interior(s));
    if interior.is_zero() {
        return Ok((MinimalCapacity::Exact(0), Some(Chain::zero(1))));
    }
    let k_max = k_max.max(1);
    let decide = |k: i64| is_boundary_at_capacity(window, c, k).map(|d| d.verdict);
    let mut lo = 0i64; // infeasible
    let mut hi = 1i64;
    let mut best = loop {
        let v = decide(hi)?;
        if v.is_feasible() {
            break v;
        }
        if hi >= k_max {
            return Ok((MinimalCapacity::NoneBelow(k_max), None));
        }
        lo = hi;
        hi = (hi * 2).min(k_max);
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let v = decide(mid)?;
        if v.is_feasible() {
            hi = mid;
            best = v;
        } else {
            lo = mid;
        }
    }
    Ok((MinimalCapacity::Exact(hi), best.witness().cloned()))
}

/// Minimal capacities of the fundamental class over an exhaustion.
pub fn capacity_profile(windows: &[SimplicialWindow], k_max: i64) -> Result<Vec<MinimalCapacity>> {
    windows
        .par_iter()
        .map(|w| minimal_capacity(w, &fundamental_class(w), k_max).map(|(k, _)| k))
        .collect()
}
