//! Truncated graded algebras, window λ-modules, flags and morphisms.

mod algebra;
pub mod examples;
mod filtered;
mod module;
mod morphism;

pub use algebra::{monomials, validate_algebra, TruncatedGradedAlgebra};
pub use filtered::{AdaptedBasis, FilteredLambdaModule};
pub use module::{subs_contains, subs_dims, subs_sum, LambdaModule, Quotient, SubTuple, Submodule};
pub use morphism::{find_isomorphism, hom_space, hom_space_plain, ModuleMorphism};
