//! Exact-arithmetic stability theory for representations of finite posets and
//! their bound Hasse quivers, together with a floating-point scaling flow that
//! balances stable subspace systems.
//!
//! The crate is organised around three layers:
//!
//! * combinatorics: [`poset`], [`quiver`] (posets, Hasse quivers, relation
//!   counts, Euler forms),
//! * exact representation theory: [`rep`], [`roots`], [`stability`],
//!   [`classify`], [`glue`], [`rigidity`] (hom/ext via the gamma map, Schur
//!   roots, canonical decomposition, King stability, the gluing construction),
//! * numerics: [`flow`] (projection balancing, Hermitian tuples, characters).
//!
//! Everything in the exact layers is deterministic given seeds and budgets and
//! uses no floating point.

pub mod arith;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod flow;
pub mod glue;
pub mod io;
pub mod matrix;
pub mod poset;
pub mod quiver;
pub mod rep;
pub mod rigidity;
pub mod roots;
pub mod stability;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
