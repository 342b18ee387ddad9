//! Geometric measure of entanglement, closest-separable-state search and the
//! entanglement-dependent QFI bounds.

mod ansatz;
mod mixed;
mod pipeline;
mod pure;
mod scaling;
mod typicality;

pub use ansatz::{product_vector, SeparableAnsatz, WEIGHT_TOL};
pub use mixed::{closest_separable, closest_separable_with, SeeSawOptions, SeparableFit};
pub use pipeline::{ghz_vector, probe_hamiltonian, scaling_pipeline, PipelineOptions, ScalingRow, MAX_PIPELINE_DIM};
pub use pure::{eg_brute, eg_pure, EgResult, DEFAULT_RESTARTS, MAX_SWEEPS, OVERLAP_TOL};
pub use scaling::{
    eg_qfi_bound, eg_qfi_bounds, eg_trace_bound_check, klocal_norm_check, scaling_bound, unitary_eg_sld_bound,
    ScalingBoundParams, UNITARY_PRECONDITION_TOL,
};
pub use typicality::{typicality_sweep, TypicalityRow};

use crate::linalg::CVector;
use crate::C64;

/// `sum conj(phi_1[i_1] ... phi_n[i_n]) psi[i_1 ... i_n]` with factor `skip`
/// left open, so the result is a vector on that site.
pub(crate) fn contract_except(psi: &[C64], factors: &[CVector], skip: usize, d: usize) -> CVector {
    let n = factors.len();
    let mut out = CVector::zeros(d);
    let mut digits = vec![0usize; n];
    for &amp in psi {
        let mut w = amp;
        for (j, f) in factors.iter().enumerate() {
            if j != skip {
                w *= f[digits[j]].conj();
            }
        }
        out[digits[skip]] += w;
        for j in (0..n).rev() {
            digits[j] += 1;
            if digits[j] < d {
                break;
            }
            digits[j] = 0;
        }
    }
    out
}

/// One alternating sweep that updates each site to the normalised partial
/// contraction; returns `|<phi|psi>|` after the last update.
pub(crate) fn sweep(psi: &[C64], factors: &mut [CVector], d: usize) -> f64 {
    let mut overlap = 0.0;
    for j in 0..factors.len() {
        let c = contract_except(psi, factors, j, d);
        let norm = c.norm();
        if norm > 0.0 {
            factors[j] = c.unscale(norm);
        }
        overlap = norm;
    }
    overlap
}
