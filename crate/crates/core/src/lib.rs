//! Syzygy orders of equivariant cohomology for fans, simplicial complexes and
//! orbit-space face structures, with an independent depth oracle.

pub mod bc;
pub mod corpus;
pub mod exactla;
pub mod fan;
pub mod generate;
pub mod gkm;
pub mod io;
pub mod poset;
pub mod report;
pub mod simplicial;
pub mod stanley;
pub mod syzygy;

pub use exactla::{
    cohomology_dims, kernel_basis, rank, CochainComplex, GradedDims, HilbertSeries, Matrix,
    Rational,
};
pub use fan::Fan;
pub use poset::FacePoset;
pub use simplicial::SimplicialComplex;
