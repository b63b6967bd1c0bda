//! Property checks shared by the proptest suite and the acceptance runner.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use coarsehom::amenability::folner_group_test;
use coarsehom::chains::{
    boundary, coboundary, is_boundary_at_capacity, leibniz_boundary, pairing, verify_witness, ez_split, Chain,
    Cochain, UffChain,
};
use coarsehom::complex::{
    barycentric_subdivide, edge_length_squared, product, standard_subdivide, CellComplex, SimplicialWindow, Simplex,
};
use coarsehom::derham::{derham_roundtrip, RationalCochain};
use coarsehom::duality::{dualize_chain, DualityMap};
use coarsehom::generators::{window, FamilySpec};
use coarsehom::line_h0::{is_null_class, primitive, EpChain};
use coarsehom::rational::Rational;
use num::{BigInt, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), TestCaseError>;

thread_local! {
    static CACHE: RefCell<HashMap<String, Rc<SimplicialWindow>>> = RefCell::new(HashMap::new());
}

/// Generated windows are reused across cases.
pub fn cached(spec: &FamilySpec) -> Rc<SimplicialWindow> {
    let key = format!("{spec:?}");
    CACHE.with(|c| {
        c.borrow_mut().entry(key).or_insert_with(|| Rc::new(window(spec).expect("valid spec"))).clone()
    })
}

/// A small member of every simplicial family.
pub fn family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (1usize..=3, 1usize..=3).prop_map(|(n, r)| FamilySpec::Grid { n, r: if n == 3 { r.min(2) } else { r } }),
        (3usize..=4, 1usize..=4).prop_map(|(d, r)| FamilySpec::Tree { d, r }),
        (prop::sample::select(vec![(4, 5), (5, 4), (3, 7), (7, 3), (4, 6)]), 1usize..=3)
            .prop_map(|((p, q), r)| FamilySpec::HyperbolicTiling { p, q, r }),
        (1usize..=2, 1usize..=3).prop_map(|(k, r)| FamilySpec::FreeCayley { k, r }),
    ]
}

/// Families that carry coordinates.
pub fn geometric() -> impl Strategy<Value = FamilySpec> {
    (1usize..=3, 1usize..=2).prop_map(|(n, r)| FamilySpec::Grid { n, r: if n == 3 { 1 } else { r } })
}

pub fn random_chain<X: CellComplex>(x: &X, q: usize, seed: u64) -> Chain<X::Cell> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = x.cells_or_empty(q);
    let entries: Vec<_> = if cells.is_empty() {
        Vec::new()
    } else {
        (0..rng.gen_range(0..=8)).map(|_| (cells[rng.gen_range(0..cells.len())].clone(), rng.gen_range(-3..=3))).collect()
    };
    Chain::new(x, q, entries).expect("cells drawn from the complex")
}

pub fn random_cochain<X: CellComplex>(x: &X, q: usize, seed: u64) -> Cochain<X::Cell> {
    let c = random_chain(x, q, seed);
    Cochain::new(x, q, c.iter().map(|(k, v)| (k.clone(), *v))).unwrap()
}

fn whole_chain<X: CellComplex>(x: &X, q: usize, seed: u64) -> Chain<X::Cell> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Chain::new(x, q, x.cells_or_empty(q).iter().map(|c| (c.clone(), rng.gen_range(-3..=3i64)))).unwrap()
}

/// Matrix and chain level `∂∂ = 0` and `δδ = 0`.
pub fn boundary_squares_to_zero(spec: &FamilySpec, seed: u64) -> Check {
    let w = cached(spec);
    for q in 2..=w.dim() {
        prop_assert!(w.boundary_matrix(q - 1).mul(w.boundary_matrix(q)).is_zero(), "{spec:?} q={q}");
        let c = whole_chain(&*w, q, seed);
        prop_assert!(boundary(&*w, &boundary(&*w, &c).unwrap()).unwrap().is_zero());
    }
    for q in 0..w.dim().saturating_sub(1) {
        prop_assert!(w.coboundary_matrix(q + 1).mul(w.coboundary_matrix(q)).is_zero());
        let c = random_cochain(&*w, q, seed);
        prop_assert!(coboundary(&*w, &coboundary(&*w, &c)).is_zero());
    }
    Ok(())
}

/// `⟨δc, b⟩ = ⟨c, ∂b⟩`.
pub fn adjointness(spec: &FamilySpec, q: usize, seed: u64) -> Check {
    let w = cached(spec);
    let q = q % w.dim().max(1);
    let c = random_cochain(&*w, q, seed);
    let b = random_chain(&*w, q + 1, seed ^ 0x9e37);
    let dense = whole_chain(&*w, q + 1, seed ^ 0x51);
    for b in [b, dense] {
        prop_assert_eq!(pairing(&coboundary(&*w, &c), &b), pairing(&c, &boundary(&*w, &b).unwrap()));
    }
    Ok(())
}

/// The subdivision map commutes with the boundary, and standard
/// subdivision keeps edge lengths within `[½ min, max]`.
pub fn subdivision_is_chain_map(spec: &FamilySpec, standard: bool) -> Check {
    let w = cached(spec);
    let (new, map) = if standard { standard_subdivide(&w).unwrap() } else { barycentric_subdivide(&w) };
    for q in 1..=w.dim() {
        let lhs = map.matrix(q - 1, &w, &new).mul(w.boundary_matrix(q));
        let rhs = new.boundary_matrix(q).mul(&map.matrix(q, &w, &new));
        prop_assert_eq!(lhs.triplets().collect::<Vec<_>>(), rhs.triplets().collect::<Vec<_>>(), "{:?} q={}", spec, q);
    }
    if standard {
        let lengths = |x: &SimplicialWindow| -> Vec<Rational> {
            x.simplices(1).iter().map(|e| edge_length_squared(x, e).unwrap()).collect()
        };
        let old = lengths(&w);
        let lo = old.iter().min().unwrap().clone() / Rational::from_integer(BigInt::from(4));
        let hi = old.iter().max().unwrap().clone();
        prop_assert!(lengths(&new).iter().all(|l| *l >= lo && *l <= hi));
    }
    Ok(())
}

/// Bounded geometry: `link_bound` does not depend on the radius.
pub fn link_bound_is_stable(spec: &FamilySpec) -> Check {
    let bigger = match spec.clone() {
        FamilySpec::Grid { n, r } => FamilySpec::Grid { n, r: r + 5 },
        FamilySpec::Tree { d, r } => FamilySpec::Tree { d, r: r + 5 },
        FamilySpec::HyperbolicTiling { p, q, r } => FamilySpec::HyperbolicTiling { p, q, r: r + 5 },
        FamilySpec::FreeCayley { k, r } => FamilySpec::FreeCayley { k, r: r + 5 },
        FamilySpec::Product { .. } => unreachable!(),
    };
    let (small, large) = (cached(spec), cached(&bigger));
    prop_assert_eq!(small.link_bound(), large.link_bound(), "{:?}", spec);
    for q in 0..=small.dim() {
        prop_assert!(small.simplices(q).iter().all(|s| large.contains(s)), "nesting {:?}", spec);
    }
    Ok(())
}

/// Feasibility is monotone in `K` and every witness checks out, both
/// through the library and by direct recomputation.
pub fn capacity_is_monotone(spec: &FamilySpec, seed: u64, k: i64) -> Check {
    let w = cached(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let interior: Vec<_> = w.interior_vertices().collect();
    let c: UffChain = Chain::new(
        &*w,
        0,
        interior.iter().filter_map(|&v| rng.gen_bool(0.5).then(|| (Simplex::vertex(v), rng.gen_range(-2..=2)))).collect::<Vec<_>>(),
    )
    .unwrap();
    let at = |k| is_boundary_at_capacity(&w, &c, k).unwrap();
    let (low, high) = (at(k), at(k + 1));
    prop_assert!(!low.verdict.is_feasible() || high.verdict.is_feasible());
    for d in [low, high] {
        if let Some(witness) = d.verdict.witness() {
            let cap = d.verdict.capacity();
            prop_assert!(verify_witness(&w, &c, witness, cap));
            prop_assert!(witness.norm() <= cap);
            let db = boundary(&*w, witness).unwrap();
            for v in &interior {
                let s = Simplex::vertex(*v);
                prop_assert_eq!(db.get(&s), c.get(&s));
            }
        }
    }
    Ok(())
}

fn tail(values: Vec<i64>, balance: bool) -> Vec<i64> {
    let mut v = values;
    if balance {
        let s: i64 = v.iter().sum();
        v.push(-s);
    }
    v
}

pub fn ep_chain() -> impl Strategy<Value = EpChain> {
    let side = || (prop::collection::vec(-2i64..=2, 1..=3), any::<bool>()).prop_map(|(v, b)| tail(v, b));
    (-20i64..=20, prop::collection::vec(-2i64..=2, 0..=6), side(), side())
        .prop_map(|(start, p, l, r)| EpChain::new(start, p, l, r).unwrap())
}

/// Linearity and translation invariance of the null test; a returned
/// primitive really is one.
pub fn line_class_laws(a: &EpChain, b: &EpChain, offset: i64) -> Check {
    if is_null_class(a) && is_null_class(b) {
        prop_assert!(is_null_class(&a.add(b)));
    }
    prop_assert_eq!(is_null_class(&a.shift(offset)), is_null_class(a));
    match primitive(a) {
        Some(phi) => {
            let d = phi.delta();
            prop_assert!((-60..60).all(|n| d.value(n) == a.value(n)));
            prop_assert!(is_null_class(a));
        }
        None => prop_assert!(!is_null_class(a)),
    }
    Ok(())
}

/// `E` passes at `k` ⇒ passes at every smaller `k`.
pub fn folner_is_monotone(points: &BTreeSet<Vec<i64>>, k1: (i64, i64), k2: (i64, i64)) -> Check {
    let gens = vec![vec![1, 0], vec![0, 1]];
    let r = |(p, q): (i64, i64)| Rational::new(BigInt::from(p), BigInt::from(q));
    let (lo, hi) = if r(k1) <= r(k2) { (r(k1), r(k2)) } else { (r(k2), r(k1)) };
    if folner_group_test(&gens, &hi, points) {
        prop_assert!(folner_group_test(&gens, &lo, points));
    }
    Ok(())
}

/// Dualizing keeps every coefficient, hence the norm, and the index
/// correspondence inverts.
pub fn dualize_preserves_coefficients(r: usize, q: usize, seed: u64) -> Check {
    let w = cached(&FamilySpec::Grid { n: 2, r });
    let map = DualityMap::new(&w).unwrap();
    let c = random_chain(&*w, q % 3, seed).restrict(|s| w.is_interior(s));
    let d = dualize_chain(&map, &c).unwrap();
    prop_assert_eq!(d.norm(), c.norm());
    for (s, a) in c.iter() {
        prop_assert_eq!(d.get(s), *a);
        let (k, i) = map.dual_index(s).unwrap();
        prop_assert_eq!(map.primal(k, i), Some(s));
    }
    Ok(())
}

/// `∫ ∘ W` is the identity, so in particular linear.
pub fn derham_roundtrip_is_identity(spec: &FamilySpec, q: usize, seed: u64) -> Check {
    let w = cached(spec);
    let q = q % (w.dim() + 1);
    let to_q = |c: &Cochain<Simplex>| -> RationalCochain { c.map_coefficients(|&v| Rational::from_integer(BigInt::from(v))) };
    let a = to_q(&random_cochain(&*w, q, seed));
    let b = to_q(&random_cochain(&*w, q, seed.wrapping_add(1))).scale(&Rational::new(BigInt::from(-3), BigInt::from(7)));
    let sum = a.add(&b);
    let back = derham_roundtrip(&w, &sum).unwrap();
    prop_assert_eq!(&back, &sum);
    let parts = derham_roundtrip(&w, &a).unwrap().add(&derham_roundtrip(&w, &b).unwrap());
    prop_assert!(back.sub(&parts).iter().all(|(_, v)| v.is_zero()));
    Ok(())
}

/// On a product window: Leibniz squares to zero, and a point factor leaves
/// the cell structure alone.
pub fn product_laws(left: &FamilySpec, right: &FamilySpec, seed: u64) -> Check {
    let (l, r) = (cached(left), cached(right));
    let x = product(&l, &r);
    for n in 2..=x.top_dim() {
        let c = random_chain(&x, n, seed);
        let split = ez_split(&x, &c).unwrap();
        let twice = leibniz_boundary(&leibniz_boundary(&split));
        prop_assert!(twice.bidegrees().all(|(i, j)| twice.components[&(i, j)].values().all(|m| m.values().all(|v| *v == 0))));
    }
    let point = coarsehom::complex::build_window(vec![coarsehom::complex::Vertex::abstract_vertex(0, false)], vec![vec![0]]).unwrap();
    let xp = product(&l, &point);
    for q in 0..=l.dim() {
        prop_assert_eq!(xp.count(q), l.simplices(q).len());
        prop_assert!(xp.cells(q).iter().zip(l.simplices(q)).all(|(cell, s)| &cell.left == s));
    }
    Ok(())
}
