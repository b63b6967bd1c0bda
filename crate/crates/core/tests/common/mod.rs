//! Independent oracles used by the integration and acceptance tests. None
//! of them calls into the library's algorithms.
#![allow(dead_code)]

pub mod props;

use std::collections::{HashMap, VecDeque};

use coarsehom::complex::SimplicialWindow;
use coarsehom::line_h0::EpChain;

/// Edmonds–Karp on the plain reduction: a unit source arc into every
/// interior vertex, an uncapped arc from every rim vertex to the sink, and
/// capacity `k` each way along every edge. The fundamental class bounds at
/// capacity `k` iff all interior units reach the sink.
pub fn fundamental_feasible(w: &SimplicialWindow, k: i64) -> bool {
    let n = w.num_vertices();
    let (s, t) = (n, n + 1);
    let mut cap: Vec<HashMap<usize, i64>> = vec![HashMap::new(); n + 2];
    let add = |cap: &mut Vec<HashMap<usize, i64>>, a: usize, b: usize, c: i64| {
        *cap[a].entry(b).or_insert(0) += c;
        cap[b].entry(a).or_insert(0);
    };
    let mut demand = 0;
    for v in 0..n {
        if w.is_boundary_vertex(v as u32) {
            add(&mut cap, v, t, i64::MAX / 4);
        } else {
            add(&mut cap, s, v, 1);
            demand += 1;
        }
    }
    for e in w.simplices(1) {
        let (a, b) = (e.vertices()[0] as usize, e.vertices()[1] as usize);
        add(&mut cap, a, b, k);
        add(&mut cap, b, a, k);
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n + 2];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for (&v, &c) in &cap[u] {
                if c > 0 && prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            break;
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            let u = prev[v];
            bottleneck = bottleneck.min(cap[u][&v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            *cap[u].get_mut(&v).unwrap() -= bottleneck;
            *cap[v].get_mut(&u).unwrap() += bottleneck;
            v = u;
        }
        flow += bottleneck;
    }
    flow == demand
}

/// Least feasible capacity by linear scan.
pub fn oracle_min_capacity(w: &SimplicialWindow, kmax: i64) -> Option<i64> {
    if w.interior_vertices().next().is_none() {
        return Some(0);
    }
    (1..=kmax).find(|&k| fundamental_feasible(w, k))
}

type P = [f64; 3];

fn mink(a: &P, b: &P) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Reflection of `x` in the geodesic through `a` and `b`, on the
/// hyperboloid: the plane spanned by `a, b` has Minkowski normal `J(a × b)`.
fn reflect(x: &P, a: &P, b: &P) -> P {
    let e = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let n = [-e[0], e[1], e[2]];
    let f = 2.0 * mink(x, &n) / mink(&n, &n);
    [x[0] - f * n[0], x[1] - f * n[1], x[2] - f * n[2]]
}

/// Points of the hyperboloid up to a small tolerance.
struct PointSet {
    index: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<P>,
}

/// Buckets are rings of hyperbolic width `RING`, cut into arcs of length
/// about `ARC`, so their size does not depend on how far out they are.
impl PointSet {
    const RING: f64 = 0.02;
    const ARC: f64 = 0.05;
    const TOL: f64 = 1e-3;

    fn new() -> Self {
        Self { index: HashMap::new(), points: Vec::new() }
    }

    fn sectors(ring: i64) -> i64 {
        let rho = (ring as f64 + 0.5) * Self::RING;
        (2.0 * std::f64::consts::PI * rho.sinh() / Self::ARC).floor() as i64 + 1
    }

    fn polar(p: &P) -> (i64, f64) {
        let ring = (p[0].max(1.0).acosh() / Self::RING).floor() as i64;
        let turn = p[2].atan2(p[1]) / (2.0 * std::f64::consts::PI) + 0.5;
        (ring, turn)
    }

    fn key(ring: i64, turn: f64) -> (i64, i64) {
        let n = Self::sectors(ring);
        (ring, ((turn * n as f64).floor() as i64).rem_euclid(n))
    }

    fn find(&self, p: &P) -> Option<usize> {
        let (ring, turn) = Self::polar(p);
        for r in ring - 1..=ring + 1 {
            let n = Self::sectors(r);
            let (_, sector) = Self::key(r, turn);
            for ds in -1..=1 {
                let key = (r, (sector + ds).rem_euclid(n));
                for &id in self.index.get(&key).into_iter().flatten() {
                    // cosh of the hyperbolic distance, minus one
                    if -mink(&self.points[id], p) - 1.0 < Self::TOL * Self::TOL / 2.0 {
                        return Some(id);
                    }
                }
            }
        }
        None
    }

    /// Canonical id of the point, and whether it was new. The first
    /// coordinates seen are kept so that rounding does not compound.
    fn insert(&mut self, p: P) -> (usize, bool) {
        if let Some(id) = self.find(&p) {
            return (id, false);
        }
        let (ring, turn) = Self::polar(&p);
        self.points.push(p);
        self.index.entry(Self::key(ring, turn)).or_default().push(self.points.len() - 1);
        (self.points.len() - 1, true)
    }
}

/// Layer sizes of the vertex graph of the `{p,q}` tiling up to graph radius
/// `r`, from the chambers of the `(2, p, q)` reflection group: each chamber
/// is a right triangle (vertex, edge midpoint, face centre) and its
/// neighbours are its reflections in its own sides.
pub fn tiling_layers(p: usize, q: usize, r: usize) -> Vec<usize> {
    use std::collections::HashSet;
    use std::f64::consts::PI;
    let (pf, qf) = (p as f64, q as f64);
    let half = ((PI / pf).cos() / (PI / qf).sin()).acosh();
    let rho = ((1.0 / (PI / qf).tan()) * (1.0 / (PI / pf).tan())).acosh();
    let a: P = [1.0, 0.0, 0.0];
    let m: P = [half.cosh(), half.sinh(), 0.0];
    let c: P = [rho.cosh(), rho.sinh() * (PI / qf).cos(), rho.sinh() * (PI / qf).sin()];
    let limit = ((r as f64 + 1.0) * 2.0 * half).cosh();

    // corner roles: 0 vertex, 1 edge midpoint, 2 face centre
    let mut corners = [PointSet::new(), PointSet::new(), PointSet::new()];
    let start = [corners[0].insert(a).0, corners[1].insert(m).0, corners[2].insert(c).0];
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    while let Some(t) = queue.pop_front() {
        let pts = [corners[0].points[t[0]], corners[1].points[t[1]], corners[2].points[t[2]]];
        if pts[0][0] > limit {
            continue;
        }
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let mut next = t;
            next[i] = corners[i].insert(reflect(&pts[i], &pts[j], &pts[k])).0;
            if i == 0 {
                edges.push((t[0], next[0]));
            }
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let n = corners[0].points.len();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &edges {
        if !adj[u].contains(&v) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut dist = vec![usize::MAX; n];
    dist[start[0]] = 0;
    let mut queue = VecDeque::from([start[0]]);
    let mut layers = vec![0usize; r + 1];
    while let Some(u) = queue.pop_front() {
        layers[dist[u]] += 1;
        if dist[u] == r {
            continue;
        }
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    layers
}

/// Exhaustive search for a primitive: tries every value `φ(lo) ∈ [−norm,
/// norm]`, propagates `φ(n) = φ(n−1) + c(n)` across `[lo, lo + sites)` and
/// accepts if `|φ| ≤ norm` throughout.
pub fn brute_force_bounded_primitive(c: &EpChain, norm: i64, sites: i64) -> bool {
    let lo = -sites / 2;
    (-norm..=norm).any(|start| {
        let mut phi = start;
        (lo + 1..lo + sites).all(|n| {
            phi += c.value(n);
            phi.abs() <= norm
        })
    })
}

/// The same decision as `brute_force_bounded_primitive`, by the range of
/// partial sums: a start value exists iff `max − min ≤ 2 norm`.
pub fn partial_sum_range(c: &EpChain, sites: i64) -> i64 {
    let lo = -sites / 2;
    let (mut acc, mut min, mut max) = (0i64, 0i64, 0i64);
    for n in lo + 1..lo + sites {
        acc += c.value(n);
        min = min.min(acc);
        max = max.max(acc);
    }
    max - min
}

/// Every integer list of length `len` with entries in `[lo, hi]`.
pub fn lists(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// The Følner ratio by direct counting, as a reduced fraction.
pub fn folner_counts(w: &SimplicialWindow) -> (u64, u64) {
    let n = w.dim();
    let volume = w.simplices(n).iter().filter(|s| s.vertices().iter().any(|&v| !w.is_boundary_vertex(v))).count();
    let rim = w.simplices(n - 1).iter().filter(|s| s.vertices().iter().all(|&v| w.is_boundary_vertex(v))).count();
    (rim as u64, volume as u64)
}
