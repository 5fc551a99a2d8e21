//! Bar complexes between window modules, their filtrations, spectral
//! sequences and Ext dimensions.

mod complex;
mod ext;
mod spectral;

pub use complex::{filtered_hom_complex, hom_complex_levels, FilteredComplex, HomFlavor};
pub use ext::{
    e1_via_graded_ext, filtered_ext_dims, graded_ext_dims, truncation_stability, ExtRoute, ExtTable,
    TruncationReport, WindowExt,
};
pub use spectral::{spectral_sequence, Cell, SpectralPage};
