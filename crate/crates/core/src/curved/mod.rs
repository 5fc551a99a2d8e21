//! Finite dglas, their Chevalley–Eilenberg algebras read as curved dglas over
//! the base `L¹`, and the Maurer–Cartan ideal.

mod ce;
mod dgla;
mod poly;

pub use ce::{build_ce, mc_ideal_reduced, CurvedModel, DEFAULT_WEIGHT};
pub use dgla::{FiniteAxioms, FiniteDgla, Slot};
pub use poly::{DgPolynomial, Monomial, Symbols, TermJson};
