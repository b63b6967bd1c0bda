//! Chain-level Poincaré duality: a k-simplex σ of the interior corresponds
//! to its dual (n−k)-cell D(σ), and `δD(σ) = (−1)^{n−k+1} D(∂σ)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::chains::UffChain;
use crate::complex::{dual_complex_with_orientation, DualBoundary, DualCellComplex, Orientation, SimplicialWindow, Simplex};
use crate::error::{Error, Result};

/// A cochain on the dual cells, indexed by the primal simplex `σ` of each
/// `D(σ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualCochain {
    pub degree: usize,
    pub values: BTreeMap<Simplex, i64>,
}

impl DualCochain {
    pub fn get(&self, sigma: &Simplex) -> i64 {
        self.values.get(sigma).copied().unwrap_or(0)
    }

    pub fn norm(&self) -> i64 {
        self.values.values().map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc {
            degree: usize,
            dual_of: Vec<(Vec<u32>, i64)>,
        }
        let doc = Doc { degree: self.degree, dual_of: self.values.iter().map(|(s, a)| (s.vertices().to_vec(), *a)).collect() };
        serde_json::to_string_pretty(&doc).expect("cochain serializes")
    }
}

pub struct DualityMap {
    dual: DualCellComplex,
    /// Interior simplices by primal dimension; `D(σ)` is complete exactly
    /// for these.
    interior: Vec<Vec<Simplex>>,
    boundaries: BTreeMap<Simplex, DualBoundary>,
}

impl DualityMap {
    pub fn new(window: &SimplicialWindow) -> Result<Self> {
        Ok(Self::with_orientation(window, Orientation::compute(window)?))
    }

    pub fn with_orientation(window: &SimplicialWindow, orientation: Orientation) -> Self {
        let dual = dual_complex_with_orientation(window, orientation);
        let interior: Vec<Vec<Simplex>> = (0..=window.dim())
            .map(|k| window.simplices(k).iter().filter(|s| window.is_interior(s)).cloned().collect())
            .collect();
        let boundaries = interior.iter().flatten().map(|t| (t.clone(), dual.dual_boundary(t))).collect();
        Self { dual, interior, boundaries }
    }

    pub fn dim(&self) -> usize {
        self.dual.base().dim()
    }

    pub fn dual(&self) -> &DualCellComplex {
        &self.dual
    }

    /// Primal simplices whose dual cells have dimension `q`.
    pub fn dual_cells(&self, q: usize) -> &[Simplex] {
        self.dim().checked_sub(q).and_then(|k| self.interior.get(k)).map_or(&[], Vec::as_slice)
    }

    /// `(dual dimension, index)` of `D(σ)`.
    pub fn dual_index(&self, sigma: &Simplex) -> Option<(usize, usize)> {
        let q = self.dim().checked_sub(sigma.dim())?;
        self.dual_cells(q).binary_search(sigma).ok().map(|i| (q, i))
    }

    pub fn primal(&self, q: usize, index: usize) -> Option<&Simplex> {
        self.dual_cells(q).get(index)
    }

    /// Coefficient of `D(σ)` in `∂D(τ)`, for interior `τ`.
    pub fn incidence(&self, tau: &Simplex, sigma: &Simplex) -> i64 {
        self.boundaries
            .get(tau)
            .and_then(|b| b.terms.iter().find(|(rho, _)| rho == sigma))
            .map_or(0, |(_, l)| *l)
    }

    /// `(δf)(D(τ)) = Σ_σ [∂D(τ) : D(σ)] f(D(σ))`, evaluated on interior τ.
    pub fn coboundary(&self, f: &DualCochain) -> DualCochain {
        let n = self.dim();
        let mut values = BTreeMap::new();
        if f.degree < n {
            for tau in self.dual_cells(f.degree + 1) {
                let v: i64 = self.boundaries[tau].terms.iter().map(|(rho, l)| l * f.get(rho)).sum();
                if v != 0 {
                    values.insert(tau.clone(), v);
                }
            }
        }
        DualCochain { degree: f.degree + 1, values }
    }
}

/// Transports coefficients along `σ ↦ D(σ)`.
pub fn dualize_chain(map: &DualityMap, c: &UffChain) -> Result<DualCochain> {
    let n = map.dim();
    if c.degree() > n {
        return Err(Error::SupportOutsideWindow(c.iter().next().map(|(s, _)| s.clone()).unwrap_or_else(|| Simplex::vertex(0)), c.degree()));
    }
    let mut values = BTreeMap::new();
    for (s, &a) in c.iter() {
        if map.dual_index(s).is_none() {
            return Err(Error::SupportTouchesBoundary(s.clone()));
        }
        values.insert(s.clone(), a);
    }
    Ok(DualCochain { degree: n - c.degree(), values })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Interior simplex whose dual boundary was checked.
    pub simplex: Simplex,
    /// The coface `σ`, or `None` for a part of `∂D(τ)` that is no
    /// combination of dual cells.
    pub coface: Option<Simplex>,
    pub expected: i64,
    pub found: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignReport {
    pub dim: usize,
    pub checked: usize,
    pub violations: Vec<Violation>,
    /// Smallest simplex spanned by everything involved in a violation.
    pub culprit: Option<Simplex>,
}

impl SignReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_sign_identity(window: &SimplicialWindow) -> Result<SignReport> {
    Ok(check_map(&DualityMap::new(window)?))
}

/// Checks against a given, possibly incoherent, orientation.
pub fn verify_sign_identity_with(window: &SimplicialWindow, orientation: Orientation) -> SignReport {
    check_map(&DualityMap::with_orientation(window, orientation))
}

fn check_map(map: &DualityMap) -> SignReport {
    let base = map.dual.base();
    let n = base.dim();
    let mut violations = Vec::new();
    let mut checked = 0;
    for tau in map.interior.iter().flatten() {
        checked += 1;
        let b = &map.boundaries[tau];
        let k = tau.dim() + 1;
        let sign = if (n + 1 - k) % 2 == 0 { 1 } else { -1 };
        for sigma in base.cofaces(tau) {
            let found = map.incidence(tau, &sigma);
            let idx = sigma.vertices().iter().position(|v| !tau.contains_vertex(*v)).expect("coface");
            let expected = sign * if idx % 2 == 0 { 1 } else { -1 };
            if found != expected {
                violations.push(Violation { simplex: tau.clone(), coface: Some(sigma), expected, found });
            }
        }
        if !b.residual.is_empty() {
            violations.push(Violation { simplex: tau.clone(), coface: None, expected: 0, found: b.residual.len() as i64 });
        }
    }
    let culprit = culprit(base, &violations);
    SignReport { dim: n, checked, violations, culprit }
}

fn culprit(window: &SimplicialWindow, violations: &[Violation]) -> Option<Simplex> {
    // Faces where the coefficient itself is wrong point straight at the
    // offending simplex; residual-only reports are used as a fallback.
    let direct: Vec<&Violation> = violations.iter().filter(|v| v.coface.is_some()).collect();
    let pool: Vec<&Violation> = if direct.is_empty() { violations.iter().collect() } else { direct };
    let mut vertices = BTreeSet::new();
    for v in &pool {
        vertices.extend(v.simplex.vertices());
        if let Some(s) = &v.coface {
            vertices.extend(s.vertices());
        }
    }
    let s = Simplex::new(vertices.into_iter().collect()).ok()?;
    window.contains(&s).then_some(s)
}
