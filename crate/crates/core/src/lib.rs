//! Exact mutation engine for Laurent polynomial mirrors.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod error;
pub mod explorer;
pub mod lattice;
pub mod laurent;
pub mod polyhedron;
pub mod seeds;
pub mod toric;

pub use error::{Error, Result};
pub use lattice::{DirectionVector, UnimodularMap};
pub use laurent::{
    localized_mutate, ExponentVector, LaurentPoly, LocalizedPoly, Mutated, NonLaurent,
    RationalPoint,
};
pub use seeds::{catalog, EquivalenceGroup, LGSeed, SeedCanonicalForm, SeedMutation, Verdict};
pub use toric::{MonotonePolytope, MutationConfiguration};
