use std::collections::BTreeMap;

use num::{One, Zero};

use crate::rational::{determinant, factorial, int, Rational};

/// Monomial `λ^a dλ_S` on one simplex: exponents over the `d + 1`
/// barycentric coordinates and a sorted index set.
type Key = (Vec<u32>, Vec<usize>);

/// Polynomial differential form on a simplex, in its own barycentric
/// coordinates. The representation is redundant (`Σ λ = 1`, `Σ dλ = 0`);
/// integration and evaluation do not depend on the representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalForm {
    vars: usize,
    degree: usize,
    terms: BTreeMap<Key, Rational>,
}

/// Sign of `dλ_j ∧ dλ_S` relative to the sorted set, or `None` if `j ∈ S`.
fn insert_index(j: usize, set: &[usize]) -> Option<(Vec<usize>, i64)> {
    match set.binary_search(&j) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = set.to_vec();
            out.insert(pos, j);
            Some((out, if pos % 2 == 0 { 1 } else { -1 }))
        }
    }
}

impl LocalForm {
    pub fn zero(vars: usize, degree: usize) -> Self {
        Self { vars, degree, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: Key, c: Rational) {
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &LocalForm, c: &Rational) {
        debug_assert_eq!((self.vars, self.degree), (other.vars, other.degree));
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    /// `r! Σ_i (−1)^i λ_{α_i} dλ_{α_0} ∧ … ∧ \widehat{dλ_{α_i}} ∧ … ∧ dλ_{α_r}`
    /// for sorted local indices `alpha`.
    pub fn whitney_basis(vars: usize, alpha: &[usize]) -> Self {
        let r = alpha.len() - 1;
        let mut form = Self::zero(vars, r);
        let scale = Rational::from_integer(factorial(r));
        for (i, &a) in alpha.iter().enumerate() {
            let mut exps = vec![0u32; vars];
            exps[a] = 1;
            let rest: Vec<usize> = alpha.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            let sign = if i % 2 == 0 { 1 } else { -1 };
            form.add_term((exps, rest), &scale * int(sign));
        }
        form
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.vars, self.degree + 1);
        for ((exps, set), c) in &self.terms {
            for j in 0..self.vars {
                if exps[j] == 0 {
                    continue;
                }
                let Some((set, sign)) = insert_index(j, set) else { continue };
                let mut e = exps.clone();
                e[j] -= 1;
                out.add_term((e, set), c * int(sign * exps[j] as i64));
            }
        }
        out
    }

    /// `∫_τ` over the simplex itself, oriented by its vertex order, with
    /// `dλ_0 = −Σ_{i≥1} dλ_i` and `∫ λ^a dλ_1…dλ_d = Π a_i! / (d + Σ a_i)!`.
    pub fn integrate(&self) -> Rational {
        let d = self.vars - 1;
        assert_eq!(self.degree, d, "integrating a form of the wrong degree");
        let mut total = Rational::zero();
        for ((exps, set), c) in &self.terms {
            let sign = if set.first().is_none_or(|&i| i != 0) {
                1
            } else {
                // dλ_0 ∧ dλ_{S'} keeps only −dλ_m ∧ dλ_{S'}, m the index of
                // 1..=d missing from S', and sorting m in costs (−1)^{m−1}.
                let m = (1..=d).find(|i| set.binary_search(i).is_err()).expect("missing index");
                if m % 2 == 0 { 1 } else { -1 }
            };
            let num = exps.iter().fold(num::BigInt::one(), |acc, &a| acc * factorial(a as usize));
            let den = factorial(d + exps.iter().sum::<u32>() as usize);
            total += c * int(sign) * Rational::new(num, den);
        }
        total
    }

    /// Value at barycentric point `lambda` as a covector in ambient
    /// coordinates, given `grads[i] = ∇λ_i`. Keys are sorted ambient index
    /// sets of size `degree`.
    pub fn evaluate(&self, lambda: &[Rational], grads: &[Vec<Rational>]) -> BTreeMap<Vec<usize>, Rational> {
        let m = grads.first().map_or(0, Vec::len);
        let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        let subsets = subsets(m, self.degree);
        for ((exps, set), c) in &self.terms {
            let mut coeff = c.clone();
            for (l, &a) in lambda.iter().zip(exps) {
                for _ in 0..a {
                    coeff *= l;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            for sub in &subsets {
                let rows: Vec<Vec<Rational>> =
                    set.iter().map(|&s| sub.iter().map(|&b| grads[s][b].clone()).collect()).collect();
                let det = if rows.is_empty() { Rational::one() } else { determinant(rows) };
                if !det.is_zero() {
                    *out.entry(sub.clone()).or_insert_with(Rational::zero) += &coeff * det;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for last in k - 1..m {
        for mut s in subsets(last, k - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}
