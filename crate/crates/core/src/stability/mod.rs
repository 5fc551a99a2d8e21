//! Slopes, semistability and Harder–Narasimhan filtrations of window modules,
//! and the order on Hilbert polynomials.

mod hn;
mod search;
mod slope;

pub use hn::{check_hn_filtration, flag_type, hn_filtration, hn_window_membership, is_hn_filtration, HNCheck, HNReport};
pub use search::{
    best_candidate, enumerate_submodules, is_semistable, max_destabilizing, SearchMode, SearchStats, StabilityVerdict,
    CERTIFICATE_PRIMES, ENUMERATION_CAP, GRASSMANNIAN_CAP,
};
pub use slope::{module_slope, poly_order, slope, tuple_slope, PolyOrder, RationalPoly, SlopeWeights};
