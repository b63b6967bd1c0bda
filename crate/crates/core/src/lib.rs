//! Coarse-geometric invariants of bounded-geometry simplicial complexes,
//! computed on finite windows: uniformly finite chains and the degree-0
//! boundary problem, isoperimetric profiles, dual-cell duality, uniform
//! subdivision, product splittings and Whitney forms.

pub mod amenability;
pub mod chains;
pub mod cli;
pub mod complex;
pub mod generators;
pub mod line_h0;
pub mod derham;
pub mod duality;
pub mod error;
pub mod rational;
pub mod sparse;

pub use error::{Error, Result};
