//! Kleene algebras with tests and with domain.
//!
//! * [`term`] and [`parse`]: the term language and its concrete syntax.
//! * [`model`]: the [`Model`](model::Model) interface and term evaluation.
//! * [`axioms`]: axiom profiles and exhaustive law checking.
//! * [`finite`]: table-driven finite algebras, the intermediate-assertion
//!   sentence, and small-model search.
//! * [`rel`]: binary relations over a finite state space.
//! * [`cofinite`]: eventually periodic subsets of the naturals with
//!   finite/cofinite tests, and the wlp refuter.
//! * [`hoare`]: while programs, Hoare triples, wlp, verification conditions
//!   and intermediate-assertion synthesis.

pub mod axioms;
pub mod cli;
pub mod cofinite;
pub mod finite;
pub mod hoare;
pub mod model;
pub mod parse;
pub mod rel;
pub mod term;
