//! Exact computations around Harder–Narasimhan filtrations of truncated
//! graded modules: λ-modules and their stability, Hochschild dglas and
//! Maurer–Cartan loci, filtered Ext through spectral sequences,
//! Chevalley–Eilenberg algebras of curved dglas, and the window functor
//! between graded presentations and λ-modules.

pub mod cochain;
pub mod corpus;
pub mod curved;
pub mod error;
pub mod graded;
pub mod hochschild;
pub mod io;
pub mod homalg;
pub mod linalg;
pub mod scalar;
pub mod sheaf;
pub mod stability;

pub use error::{Error, Result};
pub use scalar::{FieldSpec, Scalar};
