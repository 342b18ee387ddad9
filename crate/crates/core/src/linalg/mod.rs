//! Dense complex linear algebra used by every other module: Hermitian
//! operators, ascending spectral decompositions, Schatten norms, Hermitian
//! matrix exponentials and Gauss-Legendre quadrature.

mod norms;
pub(crate) mod operator;
mod quadrature;
mod spectral;
mod svd;

pub use norms::{exp_identity_residual, schatten_norm, singular_values, trace_norm};
pub use operator::{commutator, dagger, kron, trace, HermitianOperator, HERMITIAN_TOL};
pub use quadrature::{gauss_legendre, GaussLegendre};
pub use spectral::{eigh, herm_exp, lambda_min, SpectralDecomposition};
pub use svd::{svd, Svd};
pub(crate) use spectral::exp_from_spectrum;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;
