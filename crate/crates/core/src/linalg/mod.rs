//! Dense numerical kernels: LU, symmetric tridiagonal eigensolver, nonsymmetric
//! eigenvalues, Jacobi singular values and BiCGStab.

mod bicgstab;
mod dense;
mod eig;
mod lu;
mod svd;
mod tridiag;

pub use bicgstab::{bicgstab, IterStats};
pub use dense::{dot, max_abs, norm2, DenseMatrix, Scalar};
pub use eig::dense_eig;
pub use lu::{lu_solve, lu_solve_vec, Lu};
pub use svd::{cond2, cond2_complex, singular_values};
pub use tridiag::{tridiag_eig, TridiagEigen};
