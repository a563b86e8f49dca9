//! Toolkit for ell-disjoint (k,d)-CSPs.
//!
//! A (k,d)-CSP is a conjunction of constraints, each over k distinct
//! variables with domain {0, .., d-1} and each forbidding exactly one
//! assignment to its variables; it is ell-disjoint when no two distinct
//! constraints share ell or more variables (a linear k-CNF formula is a
//! 2-disjoint (k,2)-CSP). The crate makes the classical satisfiability
//! guarantees for such CSPs executable:
//!
//! - [`solver`]: a seeded resampling solver, complete oracles (exhaustive
//!   search and a 2-SAT implication-graph path), and the frequent-variable
//!   reduction that solves sparse ell-disjoint instances constructively.
//! - [`generator`]: greedy ell-disjoint hypergraph packing, the closed-form
//!   choices of n and m, random value instantiation and a retry loop that
//!   outputs verified unsatisfiable instances.
//! - [`bounds`]: calculators for the lower/upper bounds on the largest
//!   always-satisfiable constraint count, their linear k-CNF specialization,
//!   the complete-formula size d^k, and the tower-type recursion size of the
//!   classical explicit construction.
//! - [`io`]: a byte-stable instance format plus DIMACS interchange for d = 2.
//! - [`enumerate`]: the exhaustive small-formula census showing that six
//!   clauses are the least possible for an unsatisfiable linear 2-CNF.

pub mod bounds;
pub mod csp;
pub mod enumerate;
mod error;
pub mod fixtures;
pub mod generator;
pub mod io;
pub mod rng;
pub mod solver;

pub use csp::{frequent_threshold, Assignment, Constraint, Csp, Disjointness, Literal, Value, Var};
pub use error::{Error, Result};
pub use solver::SolveOutcome;
