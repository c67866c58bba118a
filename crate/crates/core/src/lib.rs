//! Exact-arithmetic engine for classifying finite-order isometries with
//! cyclotomic minimal polynomial on the even unimodular lattices attached to
//! the known IHS deformation types.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`] - arbitrary-precision integer/rational linear algebra and
//!   number-theoretic primitives,
//! * [`lattice`] - integral Z-lattices given by Gram matrices,
//! * [`torsion`] - finite quadratic modules and their normal forms,
//! * [`genus`] - genus symbols and nonemptiness tests,
//! * [`cyclo`] - cyclotomic field invariants,
//! * [`hermitian`] - the trace construction and hermitian existence tests,
//! * [`glue`] - primitive extensions and equivariant gluing,
//! * [`classify`] - the classification tables for the IHS deformation types.

pub mod classify;
pub mod cyclo;
pub mod glue;
pub mod exact;
pub mod hermitian;
pub mod genus;
pub mod lattice;
pub mod torsion;

pub use exact::{IntMatrix, Polynomial, RatMatrix};
