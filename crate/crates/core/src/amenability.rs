//! Isoperimetric profiles of exhaustions and the amenability verdict that
//! sets them against the capacity profile of the fundamental class.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::MinimalCapacity;
use crate::complex::SimplicialWindow;
use crate::error::{Error, Result};
use crate::rational::{self, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub radius: usize,
    /// Top simplices with at least one interior vertex.
    pub volume: u64,
    /// Codimension-one simplices lying entirely on the rim.
    pub boundary_volume: u64,
    #[serde(with = "rational::serde_rational")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FolnerProfile {
    pub entries: Vec<ProfileEntry>,
}

impl FolnerProfile {
    pub fn radii(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.radius).collect()
    }

    pub fn ratios(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter().map(|e| &e.ratio)
    }
}

pub fn profile_entry(radius: usize, window: &SimplicialWindow) -> Result<ProfileEntry> {
    let n = window.dim();
    let volume = window.simplices(n).iter().filter(|s| s.vertices().iter().any(|&v| !window.is_boundary_vertex(v))).count() as u64;
    if n == 0 || volume == 0 {
        return Err(Error::EmptyWindow);
    }
    let boundary_volume = window
        .simplices(n - 1)
        .iter()
        .filter(|s| s.vertices().iter().all(|&v| window.is_boundary_vertex(v)))
        .count() as u64;
    Ok(ProfileEntry { radius, volume, boundary_volume, ratio: ratio(boundary_volume as i64, volume as i64) })
}

pub fn folner_profile(radii: &[usize], windows: &[SimplicialWindow]) -> Result<FolnerProfile> {
    if radii.len() != windows.len() {
        return Err(Error::MismatchedRadii);
    }
    let entries = radii
        .par_iter()
        .zip(windows.par_iter())
        .map(|(&r, w)| profile_entry(r, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(FolnerProfile { entries })
}

/// Følner condition for translations of ℤⁿ: `|E ∩ (a + E)| ≥ k |E|` for
/// every generator `a`.
pub fn folner_group_test(generators: &[Vec<i64>], k: &Rational, e: &BTreeSet<Vec<i64>>) -> bool {
    let size = Rational::from_integer((e.len() as i64).into());
    generators.iter().all(|a| {
        let overlap = e
            .iter()
            .filter(|x| {
                let shifted: Vec<i64> = x.iter().zip(a).map(|(xi, ai)| xi - ai).collect();
                e.contains(&shifted)
            })
            .count();
        Rational::from_integer((overlap as i64).into()) >= k * &size
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    AmenableTrend,
    NonAmenableTrend,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::AmenableTrend => "AmenableTrend",
            Classification::NonAmenableTrend => "NonAmenableTrend",
            Classification::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    #[serde(with = "rational::serde_rational")]
    pub epsilon: Rational,
    #[serde(with = "rational::serde_rational")]
    pub delta: Rational,
    pub trend_window: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { epsilon: ratio(1, 10), delta: ratio(1, 5), trend_window: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub classification: Classification,
    pub profile: FolnerProfile,
    pub capacities: Vec<MinimalCapacity>,
    pub thresholds: Thresholds,
    pub note: &'static str,
}

const MIN_RADII: usize = 4;

fn definitely_less(a: MinimalCapacity, b: MinimalCapacity) -> bool {
    match (a, b) {
        (MinimalCapacity::Exact(x), MinimalCapacity::Exact(y)) => x < y,
        // `NoneBelow(y)` means `K* > y`.
        (MinimalCapacity::Exact(x), MinimalCapacity::NoneBelow(y)) => x <= y,
        _ => false,
    }
}

pub fn verdict(profile: &FolnerProfile, capacities: &[MinimalCapacity], thresholds: &Thresholds) -> Result<Verdict> {
    let n = profile.entries.len();
    if n != capacities.len() {
        return Err(Error::MismatchedRadii);
    }
    if n < MIN_RADII {
        return Err(Error::TooFewRadii { needed: MIN_RADII, got: n });
    }
    let ratios: Vec<&Rational> = profile.ratios().collect();
    let tail = &capacities[n - thresholds.trend_window.clamp(2, n)..];

    let shrinking = ratios.windows(2).all(|w| w[1] <= w[0]) && *ratios[n - 1] < thresholds.epsilon;
    let growing = tail.windows(2).all(|w| definitely_less(w[0], w[1]));
    let bounded_below = ratios.iter().all(|r| **r >= thresholds.delta);
    let constant = tail.iter().all(|k| k.exact().is_some() && *k == tail[0]);

    let classification = if shrinking && growing {
        Classification::AmenableTrend
    } else if bounded_below && constant {
        Classification::NonAmenableTrend
    } else {
        Classification::Inconclusive
    };
    Ok(Verdict {
        classification,
        profile: profile.clone(),
        capacities: capacities.to_vec(),
        thresholds: thresholds.clone(),
        note: "heuristic trend on finite windows, not a proof",
    })
}

fn capacity_field(k: Option<&MinimalCapacity>) -> String {
    match k {
        Some(MinimalCapacity::Exact(k)) => k.to_string(),
        Some(MinimalCapacity::NoneBelow(k)) => format!(">{k}"),
        None => String::new(),
    }
}

/// `radius,volume,boundary_volume,ratio,min_capacity` rows.
pub fn profile_csv(profile: &FolnerProfile, capacities: &[MinimalCapacity]) -> String {
    let mut out = String::from("radius,volume,boundary_volume,ratio,min_capacity\n");
    for (i, e) in profile.entries.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.radius,
            e.volume,
            e.boundary_volume,
            rational::format(&e.ratio),
            capacity_field(capacities.get(i))
        );
    }
    out
}
