//! The Hochschild dgla of a window space, its Maurer–Cartan points and the
//! gauge action.

mod axioms;
mod dgla;
mod gauge;

pub use axioms::{check_axioms, AxiomReport};
pub use dgla::{Cochain, HochschildDgla, MAX_WINDOW_LENGTH};
pub use gauge::GaugeElement;
