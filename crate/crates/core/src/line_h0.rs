//! Uniformly finite 0-chains on ℤ with eventually periodic coefficients.
//!
//! A 0-chain `c` is null in `H₀^uff(ℝ;ℤ)` when `c = δφ` for a bounded `φ`,
//! where `δφ(n) = φ(n) − φ(n−1)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// `c(n)` is `prefix[n − start]` on `[start, start + len)`, repeats `right`
/// from `start + len` upward and `left` from `start − 1` downward (so
/// `left[0]` sits at `start − 1`, `left[1]` at `start − 2`, …).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpChain {
    start: i64,
    prefix: Vec<i64>,
    left: Vec<i64>,
    right: Vec<i64>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl EpChain {
    pub fn new(start: i64, prefix: Vec<i64>, left: Vec<i64>, right: Vec<i64>) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::Parse("tail periods must be non-empty".into()));
        }
        Ok(Self { start, prefix, left, right })
    }

    /// Prefix placed on `[−m, m]` (for odd length `2m + 1`; an even-length
    /// prefix starts at `−len/2`).
    pub fn centered(prefix: Vec<i64>, left: Vec<i64>, right: Vec<i64>) -> Result<Self> {
        let start = -(prefix.len() as i64 / 2);
        Self::new(start, prefix, left, right)
    }

    pub fn constant(a: i64) -> Self {
        Self { start: 0, prefix: Vec::new(), left: vec![a], right: vec![a] }
    }

    pub fn zero() -> Self {
        Self::constant(0)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.prefix.len() as i64
    }

    pub fn prefix(&self) -> &[i64] {
        &self.prefix
    }

    pub fn left_tail(&self) -> &[i64] {
        &self.left
    }

    pub fn right_tail(&self) -> &[i64] {
        &self.right
    }

    pub fn value(&self, n: i64) -> i64 {
        if n < self.start {
            let k = (self.start - 1 - n) as usize;
            self.left[k % self.left.len()]
        } else if n >= self.end() {
            let k = (n - self.end()) as usize;
            self.right[k % self.right.len()]
        } else {
            self.prefix[(n - self.start) as usize]
        }
    }

    pub fn norm(&self) -> i64 {
        self.prefix.iter().chain(&self.left).chain(&self.right).map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn shift(&self, offset: i64) -> Self {
        Self { start: self.start + offset, ..self.clone() }
    }

    /// Pointwise combination, on the union of both prefixes with tail
    /// periods the lcm of the operands'.
    pub fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        let start = self.start.min(other.start);
        let end = self.end().max(other.end());
        let g = |n| f(self.value(n), other.value(n));
        let left_len = lcm(self.left.len(), other.left.len());
        let right_len = lcm(self.right.len(), other.right.len());
        Self {
            start,
            prefix: (start..end).map(g).collect(),
            left: (0..left_len as i64).map(|k| g(start - 1 - k)).collect(),
            right: (0..right_len as i64).map(|k| g(end + k)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.zip_with(&Self::zero(), |a, _| -a)
    }

    /// `δφ` for `φ` given as a chain.
    pub fn delta(&self) -> Self {
        let shifted = self.shift(1);
        self.sub(&shifted)
    }
}

impl fmt::Display for EpChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        let mut left = self.left.clone();
        left.reverse();
        write!(f, "…({})|{}@{}|({})…", join(&left), join(&self.prefix), self.start, join(&self.right))
    }
}

/// Both tail periods sum to zero, which is exactly when the partial sums
/// of `c` stay bounded.
pub fn is_null_class(c: &EpChain) -> bool {
    c.left.iter().sum::<i64>() == 0 && c.right.iter().sum::<i64>() == 0
}

/// The bounded primitive `φ` with `δφ = c` and least sup norm, if any.
pub fn primitive(c: &EpChain) -> Option<EpChain> {
    if !is_null_class(c) {
        return None;
    }
    // φ(start − 1) = 0, then φ(n) = φ(n − 1) + c(n) going up and
    // φ(n − 1) = φ(n) − c(n) going down.
    let mut prefix = Vec::with_capacity(c.prefix.len());
    let mut acc = 0i64;
    for &a in &c.prefix {
        acc += a;
        prefix.push(acc);
    }
    let mut right = Vec::with_capacity(c.right.len());
    for &a in &c.right {
        acc += a;
        right.push(acc);
    }
    let mut left = Vec::with_capacity(c.left.len());
    let mut acc = 0i64;
    for &a in &c.left {
        left.push(acc);
        acc -= a;
    }
    let lo = prefix.iter().chain(&left).chain(&right).min().copied().unwrap_or(0);
    let hi = prefix.iter().chain(&left).chain(&right).max().copied().unwrap_or(0);
    let offset = -(lo + hi).div_euclid(2);
    let bump = |v: Vec<i64>| v.into_iter().map(|x| x + offset).collect();
    Some(EpChain { start: c.start, prefix: bump(prefix), left: bump(left), right: bump(right) })
}

pub fn classes_equal(a: &EpChain, b: &EpChain) -> bool {
    is_null_class(&a.sub(b))
}
