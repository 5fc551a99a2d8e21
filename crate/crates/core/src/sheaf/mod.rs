//! Finitely presented graded modules over `k[x_0, …, x_n]` standing in for
//! coherent sheaves: graded pieces, the window functors `Γ_{[p,q]}` and
//! `Γ^fil_{[p,q]}`, the left adjoint `𝒮`, Hilbert polynomials and the split
//! bundles on P¹ whose HN filtrations are known in closed form.
//!
//! Graded pieces are identified with sheaf sections only above a regularity
//! bound that the caller supplies; nothing here computes saturations.

mod hilbert;
mod poly;
mod presentation;
mod sheafify;

pub use hilbert::{
    gr_hilbert_polynomials, hilbert_polynomial, interpolate, p1_split_hn, step2_identity_check, step2_with_alpha,
    SplitBundleSpec, Step2Report,
};
pub use poly::{var_name, Poly};
pub use presentation::{gamma_window, gamma_window_filtered, FilteredPresentation, FreeElement, GradedPiece, GradedPresentation};
pub use sheafify::{roundtrip_check, roundtrip_check_filtered, sheafify, sheafify_filtered};
