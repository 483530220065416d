//! Finite effect algebras and measures on them.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`] holds the partial-sum table, axiom validation and the derived
//!   order, difference and orthosupplement.
//! * [`constructions`] builds the standard carriers: powerset Boolean algebras,
//!   discretised scale algebras, effect algebras of sets and the six-element
//!   half-plane algebra.
//! * [`rdp`] decides the Riesz decomposition property and produces
//!   decompositions along orthosums.
//! * [`measure`] carries vector-valued additive maps, bound computations and
//!   random generation.
//! * [`variation`] enumerates decompositions and computes the variation of a
//!   measure, together with a checker for its structural properties.
//! * [`symbolic`] is an exact implementation of an infinite effect algebra of
//!   subsets of the naturals built from prime powers.

pub mod algebra;
pub mod constructions;
mod error;
pub mod format;
pub mod measure;
pub mod mutate;
pub mod rdp;
pub mod symbolic;
pub mod variation;

pub use algebra::{EffectAlgebra, EffectAlgebraTable, ElementId, ValidationReport};
pub use error::{Error, Result};
pub use measure::{Measure, MeasureFamily, Value};
pub use variation::{Mode, VariationResult};

/// Default tolerance for floating point comparisons of measure values.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default upper bound on carrier size accepted by validation.
pub const DEFAULT_MAX_SIZE: usize = 512;
