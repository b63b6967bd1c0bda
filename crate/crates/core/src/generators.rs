//! Canonical window families: Euclidean grids (amenable), regular trees,
//! free-group Cayley balls and hyperbolic `{p,q}` tilings (non-amenable),
//! and products of these.
//!
//! Vertex ids are assigned by distance shell from the origin, so windows of
//! one family at increasing radii nest with stable ids.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::{build_window, product, CellWindow, Metadata, SimplicialWindow, Vertex, VertexId};
use crate::error::{Error, Result};
use crate::rational::int;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum FamilySpec {
    Grid { n: usize, r: usize },
    Tree { d: usize, r: usize },
    HyperbolicTiling { p: usize, q: usize, r: usize },
    FreeCayley { k: usize, r: usize },
    Product { left: Box<FamilySpec>, right: Box<FamilySpec> },
}

/// A family with the radius left open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Family {
    Grid { n: usize },
    Tree { d: usize },
    HyperbolicTiling { p: usize, q: usize },
    FreeCayley { k: usize },
}

impl Family {
    pub fn at(self, r: usize) -> FamilySpec {
        match self {
            Family::Grid { n } => FamilySpec::Grid { n, r },
            Family::Tree { d } => FamilySpec::Tree { d, r },
            Family::HyperbolicTiling { p, q } => FamilySpec::HyperbolicTiling { p, q, r },
            Family::FreeCayley { k } => FamilySpec::FreeCayley { k, r },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Grid { .. } => "grid",
            Family::Tree { .. } => "tree",
            Family::HyperbolicTiling { .. } => "hyperbolic_tiling",
            Family::FreeCayley { .. } => "free_cayley",
        }
    }
}

/// What a spec generates: a simplicial window, or a product cell window.
#[derive(Debug, Clone)]
pub enum Space {
    Simplicial(SimplicialWindow),
    Product(CellWindow),
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        match *self {
            FamilySpec::Grid { n, r } if n == 0 || r == 0 => bad("grid needs n >= 1 and r >= 1"),
            FamilySpec::Tree { d, r } if d < 3 || r == 0 => bad("tree needs d >= 3 and r >= 1"),
            FamilySpec::HyperbolicTiling { p, q, r } if r == 0 || p < 3 || q < 3 || (p - 2) * (q - 2) <= 4 => {
                bad("tiling needs (p-2)(q-2) > 4 and r >= 1")
            }
            FamilySpec::FreeCayley { k, r } if k == 0 || r == 0 => bad("free_cayley needs k >= 1 and r >= 1"),
            FamilySpec::Product { ref left, ref right } => {
                left.validate()?;
                right.validate()
            }
            _ => Ok(()),
        }
    }
}

pub fn generate(spec: &FamilySpec) -> Result<Space> {
    spec.validate()?;
    Ok(match spec {
        FamilySpec::Product { left, right } => Space::Product(product(&window(left)?, &window(right)?)),
        _ => Space::Simplicial(window(spec)?),
    })
}

/// Generates a simplicial (non-product) family member.
pub fn window(spec: &FamilySpec) -> Result<SimplicialWindow> {
    spec.validate()?;
    match *spec {
        FamilySpec::Grid { n, r } => grid(n, r),
        FamilySpec::Tree { d, r } => tree(d, r, "tree", &[("d", d), ("r", r)]),
        FamilySpec::FreeCayley { k, r } => tree(2 * k, r, "free_cayley", &[("k", k), ("r", r)]),
        FamilySpec::HyperbolicTiling { p, q, r } => Ok(TilingBall::new(p, q, r)?.window(r)),
        FamilySpec::Product { .. } => Err(Error::InvalidSpec("product does not yield a simplicial window".into())),
    }
}

/// Nested windows at the given radii (strictly increasing).
pub fn exhaustion(family: Family, radii: &[usize]) -> Result<Vec<SimplicialWindow>> {
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::RadiiNotIncreasing);
    }
    let Some(&max) = radii.last() else { return Ok(Vec::new()) };
    for &r in radii {
        family.at(r).validate()?;
    }
    if let Family::HyperbolicTiling { p, q } = family {
        let ball = TilingBall::new(p, q, max)?;
        return Ok(radii.iter().map(|&r| ball.window(r)).collect());
    }
    radii.iter().map(|&r| window(&family.at(r))).collect()
}

fn metadata(generator: &str, params: &[(&str, usize)]) -> Metadata {
    Metadata {
        generator: generator.to_string(),
        params: params.iter().map(|(k, v)| (k.to_string(), *v as i64)).collect(),
    }
}

/// Freudenthal triangulation of `[-r, r]^n`: each unit cube with lower
/// corner `c` splits into the `n!` simplices `c, c+e_π(1), c+e_π(1)+e_π(2), …`.
fn grid(n: usize, r: usize) -> Result<SimplicialWindow> {
    let r = r as i64;
    let mut points: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        points = points
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    let shell = |p: &[i64]| p.iter().map(|x| x.abs()).max().unwrap_or(0);
    points.sort_by(|a, b| shell(a).cmp(&shell(b)).then_with(|| a.cmp(b)));
    let ids: HashMap<Vec<i64>, VertexId> = points.iter().enumerate().map(|(i, p)| (p.clone(), i as VertexId)).collect();
    let vertices = points
        .iter()
        .enumerate()
        .map(|(i, p)| Vertex {
            id: i as VertexId,
            pos: Some(p.iter().map(|&x| int(x)).collect()),
            boundary: shell(p) == r,
        })
        .collect();

    let perms = permutations(n);
    let mut simplices = Vec::new();
    for corner in points.iter().filter(|p| p.iter().all(|&x| x < r)) {
        for perm in &perms {
            let mut p = corner.clone();
            let mut s = vec![ids[&p]];
            for &axis in perm {
                p[axis] += 1;
                s.push(ids[&p]);
            }
            simplices.push(s);
        }
    }
    Ok(build_window(vertices, simplices)?.with_metadata(metadata("grid", &[("n", n), ("r", r as usize)])))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Ball of radius `r` about the root of the `d`-regular tree, in BFS order;
/// leaves are rim.
fn tree(d: usize, r: usize, name: &str, params: &[(&str, usize)]) -> Result<SimplicialWindow> {
    let mut depth = vec![0usize];
    let mut edges = Vec::new();
    let mut frontier = vec![0 as VertexId];
    for level in 1..=r {
        let mut next = Vec::new();
        for &u in &frontier {
            let children = if level == 1 { d } else { d - 1 };
            for _ in 0..children {
                let v = depth.len() as VertexId;
                depth.push(level);
                edges.push(vec![u, v]);
                next.push(v);
            }
        }
        frontier = next;
    }
    let vertices = depth
        .iter()
        .enumerate()
        .map(|(i, &k)| Vertex::abstract_vertex(i as VertexId, k == r))
        .collect();
    Ok(build_window(vertices, edges)?.with_metadata(metadata(name, params)))
}

type Mat3 = [[f64; 3]; 3];

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// Breadth-first enumeration of the vertex graph of the `{p,q}` tiling.
///
/// Group elements act on the hyperboloid model as `SO(2,1)` matrices: a
/// rotation by `2π/q` about the base vertex, and a turn-and-translate along
/// one edge. The canonical form of an element's image vertex is its
/// quantised spatial coordinate, so distinct words reaching the same vertex
/// collapse to one id.
#[derive(Debug, Clone)]
pub struct TilingBall {
    p: usize,
    q: usize,
    depth: Vec<usize>,
    edges: Vec<(VertexId, VertexId)>,
}

impl TilingBall {
    pub fn new(p: usize, q: usize, radius: usize) -> Result<Self> {
        FamilySpec::HyperbolicTiling { p, q, r: radius.max(1) }.validate()?;
        let (pf, qf) = (p as f64, q as f64);
        let half = ((std::f64::consts::PI / pf).cos() / (std::f64::consts::PI / qf).sin()).acosh();
        let edge = 2.0 * half;
        let turn = 2.0 * std::f64::consts::PI / qf;
        let rotation = |t: f64| -> Mat3 { [[1.0, 0.0, 0.0], [0.0, t.cos(), -t.sin()], [0.0, t.sin(), t.cos()]] };
        let boost: Mat3 = [[edge.cosh(), edge.sinh(), 0.0], [edge.sinh(), edge.cosh(), 0.0], [0.0, 0.0, 1.0]];
        // Arriving at the neighbour facing back along the edge.
        let step = mat_mul(&boost, &rotation(std::f64::consts::PI));
        let moves: Vec<Mat3> = (0..q).map(|j| mat_mul(&rotation(turn * j as f64), &step)).collect();

        const CELL: f64 = 0.25;
        const TOL: f64 = 0.1;
        let mut index: HashMap<(i64, i64), Vec<VertexId>> = HashMap::new();
        let mut points: Vec<[f64; 2]> = Vec::new();
        let mut frames: Vec<Mat3> = Vec::new();
        let mut depth = Vec::new();
        let mut edges = BTreeMap::new();
        let cell_of = |x: f64| (x / CELL).floor() as i64;

        let mut lookup_or_insert = |pt: [f64; 2], frame: Mat3, d: usize, points: &mut Vec<[f64; 2]>, frames: &mut Vec<Mat3>, depth: &mut Vec<usize>, create: bool| -> Option<VertexId> {
            let (cx, cy) = (cell_of(pt[0]), cell_of(pt[1]));
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(ids) = index.get(&(cx + dx, cy + dy)) {
                        for &id in ids {
                            let o = points[id as usize];
                            if (o[0] - pt[0]).abs() < TOL && (o[1] - pt[1]).abs() < TOL {
                                return Some(id);
                            }
                        }
                    }
                }
            }
            if !create {
                return None;
            }
            let id = points.len() as VertexId;
            points.push(pt);
            frames.push(frame);
            depth.push(d);
            index.entry((cx, cy)).or_default().push(id);
            Some(id)
        };

        let identity: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        lookup_or_insert([0.0, 0.0], identity, 0, &mut points, &mut frames, &mut depth, true);
        let mut frontier = vec![0 as VertexId];
        for layer in 0..=radius {
            let mut next = Vec::new();
            for &u in &frontier {
                for m in &moves {
                    let g = mat_mul(&frames[u as usize], m);
                    let pt = [g[1][0], g[2][0]];
                    let create = layer < radius;
                    let before = points.len();
                    if let Some(v) = lookup_or_insert(pt, g, layer + 1, &mut points, &mut frames, &mut depth, create) {
                        if points.len() > before {
                            next.push(v);
                        }
                        if u != v {
                            edges.insert((u.min(v), u.max(v)), ());
                        }
                    }
                }
            }
            frontier = next;
        }
        let ball = Self { p, q, depth, edges: edges.into_keys().collect() };
        ball.check_degrees(radius)?;
        Ok(ball)
    }

    fn check_degrees(&self, radius: usize) -> Result<()> {
        let mut degree = vec![0usize; self.depth.len()];
        for &(a, b) in &self.edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        for (v, &d) in self.depth.iter().enumerate() {
            if d < radius && degree[v] != self.q {
                return Err(Error::InvalidSpec(format!("tiling enumeration lost precision at vertex {v}")));
            }
        }
        Ok(())
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let max = self.depth.iter().copied().max().unwrap_or(0);
        let mut sizes = vec![0; max + 1];
        for &d in &self.depth {
            sizes[d] += 1;
        }
        sizes
    }

    /// The induced ball of radius `r ≤` the enumerated radius; the rim layer
    /// is flagged.
    pub fn window(&self, r: usize) -> SimplicialWindow {
        let count = self.depth.iter().take_while(|&&d| d <= r).count();
        debug_assert!(self.depth[count..].iter().all(|&d| d > r));
        let vertices = self.depth[..count]
            .iter()
            .enumerate()
            .map(|(i, &d)| Vertex::abstract_vertex(i as VertexId, d == r))
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(_, b)| (b as usize) < count)
            .map(|&(a, b)| vec![a, b])
            .collect();
        build_window(vertices, edges)
            .expect("tiling ball is a valid graph")
            .with_metadata(metadata("hyperbolic_tiling", &[("p", self.p), ("q", self.q), ("r", r)]))
    }
}
