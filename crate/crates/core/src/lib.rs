//! Quadratic and Garside normalisation in monoids.
//!
//! The crate provides a generic normal-form engine driven by a finite
//! length-two pair table, concrete instances (free abelian cubes, braid
//! permutation lattices, torus-type chains, plactic columns, presented
//! monoids with Garside families), class and domino analysis, and the
//! translation to quadratic rewriting systems.

pub mod error;
pub mod words;
pub mod normalise;
pub mod lattice;
pub mod class;
pub mod family;
pub mod plactic;
pub mod rewrite;
pub mod instances;
pub mod formats;

pub use error::{Error, Result};
