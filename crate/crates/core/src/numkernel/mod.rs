//! Dense complex linear algebra kernels.
//!
//! Everything downstream builds on this module: matrix storage and
//! arithmetic, LU/QR factorizations, a one-sided Jacobi SVD, a complex Schur
//! decomposition with eigenvalue extraction, polynomial helpers, seeded
//! randomness, and a plain-text matrix file format.

pub mod io;
pub mod lu;
pub mod matrix;
pub mod poly;
pub mod qr;
pub mod rng;
pub mod schur;
pub mod spectrum;
pub mod svd;

pub use io::{load_cmx, read_cmx, save_cmx, write_cmx};
pub use lu::{lu_factor, lu_inverse, lu_solve, LuFactors};
pub use matrix::{vec_dot, vec_norm, CMatrix};
pub use poly::{poly_add, poly_eval, poly_eval_matrix, poly_integrate, poly_mul, poly_roots, MonicPoly};
pub use qr::{least_squares, numerical_rank, orthonormal_basis, qr_factor};
pub use schur::{eigen_pairs, eigenvalues_only, schur_factor, Schur, EIGEN_DIM_CAP};
pub use spectrum::{eigenvalues, jordan_heights, spectral_radius, Cluster, Spectrum};
pub use svd::{
    hermitian_eigen, min_singular_upper_tri, op_norm, op_norm_est, singular_values, svd,
    top_singular_block, top_singular_triple, Svd,
};
