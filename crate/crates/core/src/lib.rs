//! Symbolic engine for Lie and Q-conditional (nonclassical) symmetries of
//! partial differential equations.
//!
//! The crate is `no_std` and only needs an allocator. It contains
//!
//! * [`expr`]: a small computer-algebra kernel over jet coordinates with exact
//!   rational arithmetic and a canonical form for rational functions,
//! * [`operators`]: first-order vector fields, characteristics, prolongations
//!   and Lie brackets,
//! * [`invariance`]: invariance residuals restricted to solution manifolds and
//!   extraction of determining systems,
//! * [`reduction`]: ansatz verification and symbolic reduction,
//! * [`casebook`]: executable checks for the classical heat-equation and
//!   transfer-equation results.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod casebook;
pub mod error;
pub mod expr;
pub mod invariance;
pub mod linalg;
pub mod operators;
pub mod random;
pub mod reduction;

pub use error::{Error, Result};
pub use expr::{
    collect_coefficients, Atom, Expr, JetContext, Monomial, MultiIndex, Rat, Rule, RuleSet, Symbol,
};
pub use invariance::{DeterminingSystem, PdeSystem, SolvedEquation};
pub use operators::{InvolutiveSet, ProlongedField, VectorField};
pub use reduction::{Ansatz, ReducedSystem};
