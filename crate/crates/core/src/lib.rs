//! Exact point-free integration of simple functions on finite distributive
//! lattices, viewed as σ-frames.
//!
//! The crate covers the whole chain: lattices and their congruence frames,
//! measurable functions given by σ-scales, simple functions and their
//! canonical form, measures on σ-sublocales, the integral, and the bridge to
//! classical finite measure spaces.

pub mod classical;
pub mod congruence;
pub mod decompose;
pub mod document;
pub mod error;
pub mod integral;
pub mod lattice;
pub mod measure;
pub mod rational;
pub mod real;
pub mod simple;
pub mod verify;

pub use error::{Axiom, Error, Result};
pub use lattice::{Elem, FiniteLattice};
pub use rational::{Extended, Rational};
