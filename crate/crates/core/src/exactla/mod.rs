//! Exact linear algebra over the rationals.

mod complex;
mod graded;
mod matrix;
mod rational;
mod series;

pub use complex::{cohomology_dims, CochainComplex, ComplexError};
pub use graded::GradedDims;
pub use matrix::{determinant, kernel_basis, rank, sparse_rank, Matrix};
pub use rational::{ParseRationalError, Rational};
pub use series::{binomial, HilbertSeries};
