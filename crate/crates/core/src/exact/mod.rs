//! Exact arithmetic substrate: polynomials, matrices, kernels and lattice reduction.

pub mod kernel;
pub mod lll;
pub mod matrix;
pub mod poly;

pub use kernel::{integer_kernel_basis, rational_kernel_vectors};
pub use lll::lattice_reduce;
pub use matrix::{rational_matrix_inverse, IntMatrix, RatMatrix};
pub use poly::QPoly;
