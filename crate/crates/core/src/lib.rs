//! Combinatorial engine for stellar manifolds: Z₂ simplicial complexes,
//! stellar moves, stellar structures `a★(S/≃)` and their invariants.

pub mod cells;
pub mod complex;
pub mod error;
pub mod group;
pub mod invariants;
pub mod lens;
pub mod manifold;
pub mod moves;
pub mod quotient;
pub mod structure;

pub use complex::{Complex, Simplex, Vertex};
pub use error::{Error, Result};
