//! Quantum Fisher information (QFI) and symmetric logarithmic derivative (SLD)
//! numerics for finite-dimensional parametrized states, together with
//! evaluators that certify the continuity, norm and entanglement-scaling
//! inequalities relating them.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: Hermitian operators, spectral decompositions, Schatten norms
//!   and matrix exponentials.
//! * [`states`]: density matrices, tangent states `(rho, d rho)`, sampling,
//!   phase channels and k-local Hamiltonians.
//! * [`fisher`]: SLD solvers, quantum/classical Fisher information and
//!   Cramer-Rao bounds.
//! * [`bounds`]: inequality evaluators returning [`BoundReport`]s and the
//!   seeded batch verifier.
//! * [`entanglement`]: geometric measure of entanglement, closest separable
//!   state search and QFI-vs-entanglement bounds.

pub mod bounds;
pub mod entanglement;
mod error;
pub mod fisher;
pub mod linalg;
pub mod report;
pub mod seed;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, HermitianOperator, SpectralDecomposition};
pub use report::{BoundId, BoundReport};
pub use states::{DensityMatrix, KLocalHamiltonian, Povm, TangentState};

pub use num_complex::Complex64 as C64;
