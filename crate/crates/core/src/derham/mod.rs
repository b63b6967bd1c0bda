//! Whitney forms and integration: the two maps of the de Rham theorem on a
//! window with affine geometry, in exact rational arithmetic.

mod form;

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::Serialize;

pub use form::LocalForm;

use crate::chains::{coboundary, Cochain, UffCochain};
use crate::complex::{SimplicialWindow, Simplex};
use crate::error::{Error, Result};
use crate::rational::{self, int, inverse, Rational};

pub type RationalCochain = Cochain<Simplex, Rational>;

/// `W(c) = Σ_σ c(σ) W(c_σ)`.
#[derive(Debug, Clone)]
pub struct WhitneyForm<'a> {
    window: &'a SimplicialWindow,
    degree: usize,
    coefficients: BTreeMap<Simplex, Rational>,
}

/// `∇λ_i` for each vertex of a top simplex and its base point, valid when
/// the simplex spans the ambient space.
struct Frame {
    base: Vec<Rational>,
    /// Rows of the inverse edge matrix: `λ_i(x) = inv[i−1] · (x − base)`.
    inv: Vec<Vec<Rational>>,
    grads: Vec<Vec<Rational>>,
}

fn frame(window: &SimplicialWindow, top: &Simplex) -> Result<Frame> {
    let pos = |v| window.position(v).ok_or(Error::MissingGeometry);
    let vs = top.vertices();
    let base = pos(vs[0])?.to_vec();
    let m = base.len();
    if m != top.dim() {
        return Err(Error::MissingGeometry);
    }
    // Columns v_i − v_0; we need the matrix with those as columns, so rows
    // are coordinates.
    let mut rows = vec![vec![Rational::zero(); m]; m];
    for (j, &v) in vs[1..].iter().enumerate() {
        let p = pos(v)?;
        for i in 0..m {
            rows[i][j] = &p[i] - &base[i];
        }
    }
    let inv = inverse(&rows).ok_or(Error::MissingGeometry)?;
    let mut grads = Vec::with_capacity(m + 1);
    let g0: Vec<Rational> = (0..m).map(|b| -inv.iter().map(|r| r[b].clone()).sum::<Rational>()).collect();
    grads.push(g0);
    grads.extend(inv.iter().cloned());
    Ok(Frame { base, inv, grads })
}

impl Frame {
    fn barycentric(&self, x: &[Rational]) -> Vec<Rational> {
        let rel: Vec<Rational> = x.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        let tail: Vec<Rational> = self.inv.iter().map(|r| r.iter().zip(&rel).map(|(a, b)| a * b).sum()).collect();
        let head = int(1) - tail.iter().sum::<Rational>();
        std::iter::once(head).chain(tail).collect()
    }
}

pub type Covector = BTreeMap<Vec<usize>, Rational>;

fn covector_norm(c: &Covector) -> Rational {
    c.values().map(Signed::abs).fold(Rational::zero(), |m, a| if a > m { a } else { m })
}

impl<'a> WhitneyForm<'a> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &BTreeMap<Simplex, Rational> {
        &self.coefficients
    }

    /// Pullback to `τ` in its own barycentric coordinates. Only the basis
    /// forms of faces of `τ` survive, since `φ_α` vanishes on `τ` for `α ∉ τ`.
    pub fn restrict(&self, tau: &Simplex) -> LocalForm {
        let vars = tau.dim() + 1;
        let mut out = LocalForm::zero(vars, self.degree);
        if self.degree > tau.dim() {
            return out;
        }
        for face in tau.faces().into_iter().filter(|f| f.dim() == self.degree) {
            if let Some(c) = self.coefficients.get(&face) {
                let alpha: Vec<usize> = face.vertices().iter().map(|&v| tau.position(v).expect("face vertex")).collect();
                out.add_scaled(&LocalForm::whitney_basis(vars, &alpha), c);
            }
        }
        out
    }

    /// Top simplices whose closed hull contains `x`.
    pub fn containing_tops(&self, x: &[Rational]) -> Result<Vec<Simplex>> {
        let mut out = Vec::new();
        for top in self.window.simplices(self.window.dim()) {
            let f = frame(self.window, top)?;
            if f.barycentric(x).iter().all(|l| !l.is_negative()) {
                out.push(top.clone());
            }
        }
        Ok(out)
    }

    /// Value at `x`, computed inside the top simplex `top`.
    pub fn evaluate_in(&self, top: &Simplex, x: &[Rational]) -> Result<Covector> {
        let f = frame(self.window, top)?;
        Ok(self.restrict(top).evaluate(&f.barycentric(x), &f.grads))
    }

    /// Value at `x` from the first top simplex containing it; `None`
    /// outside the window.
    pub fn evaluate(&self, x: &[Rational]) -> Result<Option<Covector>> {
        match self.containing_tops(x)?.first() {
            Some(top) => self.evaluate_in(top, x).map(Some),
            None => Ok(None),
        }
    }

    /// Largest coefficient of the form over barycentric lattice points with
    /// denominator `resolution` in every top simplex.
    pub fn sampled_sup_norm(&self, resolution: u32) -> Result<Rational> {
        let n = self.window.dim();
        let mut best = Rational::zero();
        let points = lattice(n + 1, resolution);
        for top in self.window.simplices(n) {
            let local = self.restrict(top);
            if local.is_zero() {
                continue;
            }
            let f = frame(self.window, top)?;
            for lambda in &points {
                let v = covector_norm(&local.evaluate(lambda, &f.grads));
                if v > best {
                    best = v;
                }
            }
        }
        Ok(best)
    }
}

/// Barycentric points `k / resolution` with `Σ k = resolution`.
fn lattice(vars: usize, resolution: u32) -> Vec<Vec<Rational>> {
    fn go(vars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            go(vars - 1, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    go(vars, resolution, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|ks| ks.into_iter().map(|k| rational::ratio(k as i64, resolution as i64)).collect())
        .collect()
}

pub fn whitney_rational<'a>(window: &'a SimplicialWindow, c: &RationalCochain) -> Result<WhitneyForm<'a>> {
    if !window.has_geometry() {
        return Err(Error::MissingGeometry);
    }
    for (s, _) in c.iter() {
        if !window.contains(s) {
            return Err(Error::UnknownSimplex(s.clone()));
        }
    }
    Ok(WhitneyForm {
        window,
        degree: c.degree(),
        coefficients: c.iter().map(|(s, a)| (s.clone(), a.clone())).collect(),
    })
}

pub fn whitney<'a>(window: &'a SimplicialWindow, c: &UffCochain) -> Result<WhitneyForm<'a>> {
    whitney_rational(window, &c.map_coefficients(|a| int(*a)))
}

/// `∫_σ ω` with σ oriented by its sorted vertices.
pub fn integrate(form: &WhitneyForm, sigma: &Simplex) -> Result<Rational> {
    if sigma.dim() != form.degree {
        return Err(Error::DegreeMismatch { form: form.degree, simplex: sigma.dim() });
    }
    if !form.window.contains(sigma) {
        return Err(Error::UnknownSimplex(sigma.clone()));
    }
    Ok(form.restrict(sigma).integrate())
}

/// `σ ↦ ∫_σ W(c)` on every simplex of the cochain's degree.
pub fn derham_roundtrip(window: &SimplicialWindow, c: &RationalCochain) -> Result<RationalCochain> {
    let w = whitney_rational(window, c)?;
    let mut values = Vec::new();
    for s in window.simplices(c.degree()) {
        values.push((s.clone(), integrate(&w, s)?));
    }
    Cochain::new(window, c.degree(), values)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizationReport {
    pub pairs_checked: usize,
    /// `(α, β, ∫_β W(c_α))` wherever it differs from `δ_αβ`.
    pub violations: Vec<(Simplex, Simplex, String)>,
}

/// `∫_{σ_β} W(c_{σ_α}) = δ_αβ` over all pairs of equal dimension.
pub fn check_normalization(window: &SimplicialWindow) -> Result<NormalizationReport> {
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    for r in 0..=window.dim() {
        for alpha in window.simplices(r) {
            let w = whitney(window, &Cochain::basis(r, alpha.clone()))?;
            for beta in window.simplices(r) {
                pairs_checked += 1;
                let v = integrate(&w, beta)?;
                let expected = if alpha == beta { int(1) } else { Rational::zero() };
                if v != expected {
                    violations.push((alpha.clone(), beta.clone(), rational::format(&v)));
                }
            }
        }
    }
    Ok(NormalizationReport { pairs_checked, violations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StokesReport {
    pub checked: usize,
    /// `(τ, ∫_τ dW(c), ∫_{∂τ} W(c), ∫_τ W(δc))` where these disagree.
    pub violations: Vec<(Simplex, String, String, String)>,
}

/// `∫_τ W(δc) = ∫_τ dW(c) = ∫_{∂τ} W(c)` for every `(r+1)`-simplex `τ`.
pub fn stokes_check(window: &SimplicialWindow, c: &RationalCochain) -> Result<StokesReport> {
    let w = whitney_rational(window, c)?;
    let w_delta = whitney_rational(window, &coboundary(window, c))?;
    let mut checked = 0;
    let mut violations = Vec::new();
    for tau in window.simplices(c.degree() + 1) {
        checked += 1;
        let interior = w.restrict(tau).d().integrate();
        let mut rim = Rational::zero();
        for (f, s) in tau.facets() {
            rim += int(s) * integrate(&w, &f)?;
        }
        let via_delta = integrate(&w_delta, tau)?;
        if interior != rim || rim != via_delta {
            violations.push((tau.clone(), rational::format(&interior), rational::format(&rim), rational::format(&via_delta)));
        }
    }
    Ok(StokesReport { checked, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_window, Vertex};
    use crate::generators::{window, FamilySpec};
    use crate::rational::ratio;

    fn standard_triangle() -> SimplicialWindow {
        let pts = [(0, 0), (1, 0), (0, 1)];
        let vs = pts
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Vertex { id: i as u32, pos: Some(vec![int(x), int(y)]), boundary: true })
            .collect();
        build_window(vs, vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn vertex_form_is_hat_function() {
        let w = window(&FamilySpec::Grid { n: 2, r: 2 }).unwrap();
        let v = w.interior_vertices().next().unwrap();
        let form = whitney(&w, &Cochain::basis(0, Simplex::vertex(v))).unwrap();
        let here = w.position(v).unwrap().to_vec();
        assert_eq!(form.evaluate(&here).unwrap().unwrap(), Covector::from([(vec![], int(1))]));
        let other = w.position(w.num_vertices() as u32 - 1).unwrap().to_vec();
        assert!(form.evaluate(&other).unwrap().unwrap().is_empty());
        for u in 0..w.num_vertices() as u32 {
            assert_eq!(integrate(&form, &Simplex::vertex(u)).unwrap(), if u == v { int(1) } else { int(0) });
        }
    }

    #[test]
    fn edge_form_on_standard_triangle() {
        let w = standard_triangle();
        let e = Simplex::new(vec![0, 1]).unwrap();
        let form = whitney(&w, &Cochain::basis(1, e.clone())).unwrap();
        // φ₀ dφ₁ − φ₁ dφ₀ with φ₁ = x, φ₀ = 1 − x − y: at (x, y) it is
        // (1 − y) dx + x dy.
        let x = [ratio(1, 3), ratio(1, 5)];
        let got = form.evaluate(&x).unwrap().unwrap();
        assert_eq!(got, Covector::from([(vec![0], ratio(4, 5)), (vec![1], ratio(1, 3))]));
        assert_eq!(integrate(&form, &e).unwrap(), int(1));
        assert_eq!(integrate(&form, &Simplex::new(vec![1, 2]).unwrap()).unwrap(), int(0));
        assert!(matches!(integrate(&form, &Simplex::vertex(0)), Err(Error::DegreeMismatch { form: 1, simplex: 0 })));
    }

    #[test]
    fn zero_form_integrates_to_zero() {
        let w = standard_triangle();
        let form = whitney(&w, &Cochain::zero(2)).unwrap();
        assert_eq!(integrate(&form, &Simplex::new(vec![0, 1, 2]).unwrap()).unwrap(), int(0));
    }

    #[test]
    fn normalization_on_small_grid() {
        let w = window(&FamilySpec::Grid { n: 2, r: 1 }).unwrap();
        let report = check_normalization(&w).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert!(report.pairs_checked > 0);
    }

    #[test]
    fn stokes_on_basis_cochains() {
        let w = window(&FamilySpec::Grid { n: 2, r: 1 }).unwrap();
        for r in 0..2 {
            for s in w.simplices(r) {
                let c = Cochain::basis(r, s.clone());
                assert!(stokes_check(&w, &c).unwrap().violations.is_empty());
            }
        }
    }

    #[test]
    fn abstract_window_has_no_forms() {
        let w = window(&FamilySpec::Tree { d: 3, r: 1 }).unwrap();
        assert!(matches!(whitney(&w, &Cochain::zero(0)), Err(Error::MissingGeometry)));
    }

    #[test]
    fn support_lies_in_star() {
        let w = window(&FamilySpec::Grid { n: 2, r: 2 }).unwrap();
        for q in 0..=2 {
            for sigma in w.simplices(q) {
                let form = whitney(&w, &Cochain::basis(q, sigma.clone())).unwrap();
                for tau in w.simplices(2) {
                    assert_eq!(form.restrict(tau).is_zero(), !sigma.is_face_of(tau), "{sigma:?} on {tau:?}");
                }
            }
        }
    }

    #[test]
    fn basis_sup_norm_is_uniform_in_radius() {
        let sup = |r| {
            let w = window(&FamilySpec::Grid { n: 2, r }).unwrap();
            let mut best = Rational::zero();
            for q in 0..=2 {
                for s in w.simplices(q) {
                    best = best.max(whitney(&w, &Cochain::basis(q, s.clone())).unwrap().sampled_sup_norm(2).unwrap());
                }
            }
            best
        };
        assert_eq!(sup(2), sup(3));
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(lattice(3, 2).len(), 6);
        assert_eq!(lattice(2, 4).len(), 5);
    }
}
