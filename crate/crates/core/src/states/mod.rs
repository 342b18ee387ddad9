//! Density matrices, tangent `(rho, d rho)` pairs, distances, seeded random
//! ensembles, unitary phase channels and k-local Hamiltonians.
//!
//! Computational-basis ordering is big-endian throughout: site 0 is the most
//! significant tensor factor.

mod density;
mod distance;
mod hamiltonian;
mod povm;
mod sampling;

pub use density::{DensityMatrix, TangentState, EIGEN_TOL, TRACE_TOL};
pub(crate) use density::check_probability as check_weights;
pub use distance::{fidelity, fvg_check, trace_distance};
pub use hamiltonian::{binomial, pauli, phase_channel, KLocalHamiltonian, LocalTerm};
pub use povm::Povm;
pub use sampling::{
    ginibre_with_rng, gue_with_rng, haar_vector, random_matrix, random_povm, random_probability,
    sample_mixed_ginibre, sample_pure_haar, sample_tangent, tangent_with_rng,
};

/// Kronecker product of a nonempty list of states.
pub fn tensor_product(states: &[DensityMatrix]) -> crate::Result<DensityMatrix> {
    let (first, rest) = states
        .split_first()
        .ok_or_else(|| crate::Error::Domain("tensor product of an empty list".into()))?;
    let mut acc = first.op().clone();
    for s in rest {
        acc = acc.kron(s.op());
    }
    DensityMatrix::new(acc)
}
