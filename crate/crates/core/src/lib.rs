//! Toolkit for studying zero-one k-laws of random s-uniform hypergraphs.
//!
//! The crate is organised around the objects the theory manipulates:
//!
//! * [`hypercore`]: finite s-uniform hypergraphs, densities, isomorphism and
//!   copy counting, distances, and the `.shg` text format.
//! * [`folang`]: first-order formulas over the signature `{N, =}`: parser,
//!   printer, quantifier depth, a memoizing model checker and builders for the
//!   distance formulas and the non-convergent properties.
//! * [`efgame`]: an exhaustive Ehrenfeucht–Fraïssé game solver that also
//!   extracts distinguishing formulas.
//! * [`extlab`]: the extension calculus: `f_α`, safe/rigid/neutral pairs,
//!   strict extensions, maximality, uncovered copies and cyclic extensions.
//! * [`randmodel`]: seeded sampling of `G^s(n,p)` and Monte Carlo experiments.
//! * [`bounds`]: exact calculators for the spectrum endpoints.
//! * [`constructions`]: the witness hypergraphs used by the non-convergence
//!   arguments, with built-in verification.

pub mod bounds;
pub mod constructions;
pub mod efgame;
mod error;
pub mod exec;
pub mod extlab;
pub mod folang;
pub mod hypercore;
pub mod randmodel;
pub mod rational;

pub use error::{Error, Result};
pub use hypercore::{Hypergraph, RootedPair, Vertex};
pub use rational::Rational;
