use std::collections::BTreeMap;

use serde::Serialize;

use super::SeparableAnsatz;
use crate::bounds::{ContinuityCoefficients, Evaluator};
use crate::fisher::{classical_fi, qfi, sld_spectral, DEFAULT_CUTOFF};
use crate::linalg::{CVector, HermitianOperator};
use crate::report::{BoundId, BoundReport};
use crate::states::{binomial, fidelity, trace_distance, DensityMatrix, KLocalHamiltonian, TangentState};
use crate::{Error, Result};

/// Largest `||d rho + i [H, rho]||_1` accepted as a unitary tangent.
pub const UNITARY_PRECONDITION_TOL: f64 = 1e-9;

/// `||rho - sigma||_1 <= 2 sqrt(1 - F(rho, sigma)^2)` for the separable state
/// described by `ansatz`.
pub fn eg_trace_bound_check(rho: &DensityMatrix, ansatz: &SeparableAnsatz) -> Result<BoundReport> {
    trace_bound_report(rho, &ansatz.density()?)
}

pub(crate) fn trace_bound_report(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundReport> {
    let f = fidelity(rho, sigma)?;
    let eg = (1.0 - f * f).max(0.0);
    Ok(BoundReport::new(BoundId::EgTraceDistance, trace_distance(rho, sigma)?, 2.0 * eg.sqrt())
        .with("fidelity", f)
        .with("eg_estimate", eg))
}

/// `[graded, sqrt]` entanglement forms of the QFI continuity bound, with
/// `sigma` the separable reference and `eg` the entanglement estimate
/// `1 - F(rho, sigma)^2`.
pub fn eg_qfi_bounds(t_rho: &TangentState, t_sigma: &TangentState, eg: f64) -> Result<Vec<BoundReport>> {
    eg_qfi_bounds_with(&Evaluator::default(), t_rho, t_sigma, eg)
}

/// `F(rho) <= F(sigma) + 16 (sum_m f_m) sqrt(E_G) + sum_n g_n ||d rho - d sigma||^n`.
pub fn eg_qfi_bound(t_rho: &TangentState, t_sigma: &TangentState, eg: f64) -> Result<BoundReport> {
    Ok(eg_qfi_bounds(t_rho, t_sigma, eg)?.swap_remove(1))
}

pub(crate) fn eg_qfi_bounds_with(
    eval: &Evaluator,
    t_rho: &TangentState,
    t_sigma: &TangentState,
    eg: f64,
) -> Result<Vec<BoundReport>> {
    if !(0.0..=1.0).contains(&eg) {
        return Err(Error::Domain(format!("entanglement estimate {eg} outside [0, 1]")));
    }
    let s = eval.pair_scalars(t_rho, t_sigma)?;
    let c = ContinuityCoefficients::from_norms(s.nu, s.dsigma, s.drho, s.ddiff);
    let f_rho = qfi(t_rho);
    let f_sigma = qfi(t_sigma);
    let deriv = c.derivative_terms(s.ddiff);
    let graded: f64 = c.f().iter().enumerate().map(|(i, f)| {
        let m = (i + 1) as i32;
        2f64.powi(m) * f * eg.powf(m as f64 / 2.0)
    }).sum();
    let sqrt_term = 16.0 * c.f_sum() * eg.sqrt();
    let graded_rhs = f_sigma + graded + deriv;
    let sqrt_rhs = f_sigma + sqrt_term + deriv;
    let finish = |r: BoundReport| {
        s.annotate(r)
            .with("qfi_sigma", f_sigma)
            .with("eg", eg)
            .with("f_sum", c.f_sum())
            .with("derivative_terms", deriv)
            .with("graded_rhs", graded_rhs)
            .with("sqrt_rhs", sqrt_rhs)
    };
    Ok(vec![
        finish(BoundReport::new(BoundId::QfiEntanglementGraded, f_rho, graded_rhs)),
        finish(BoundReport::new(BoundId::QfiEntanglement, f_rho, sqrt_rhs)),
    ])
}

/// `||L_rho - L_sigma||_inf <= 12 nu ||H||_inf sqrt(E_G)` for tangents that
/// both evolve under `H`.
pub fn unitary_eg_sld_bound(
    t_rho: &TangentState,
    t_sigma: &TangentState,
    h: &HermitianOperator,
    eg: f64,
) -> Result<BoundReport> {
    unitary_eg_sld_bound_with(&Evaluator::default(), t_rho, t_sigma, h, eg)
}

pub(crate) fn unitary_eg_sld_bound_with(
    eval: &Evaluator,
    t_rho: &TangentState,
    t_sigma: &TangentState,
    h: &HermitianOperator,
    eg: f64,
) -> Result<BoundReport> {
    check_unitary(t_rho, h)?;
    check_unitary(t_sigma, h)?;
    let s = eval.pair_scalars(t_rho, t_sigma)?;
    let l_rho = sld_spectral(t_rho, DEFAULT_CUTOFF)?.sld;
    let l_sigma = sld_spectral(t_sigma, DEFAULT_CUTOFF)?.sld;
    let lhs = (&l_rho - &l_sigma).operator_norm();
    let hn = h.operator_norm();
    Ok(s.annotate(BoundReport::new(BoundId::UnitarySldEntanglement, lhs, 12.0 * s.nu * hn * eg.sqrt()))
        .with("h_norm", hn)
        .with("eg", eg))
}

/// `||H||_inf <= C(N, k) max_S ||H_S||_inf`.
pub fn klocal_norm_check(h: &KLocalHamiltonian) -> BoundReport {
    let norm = h.assemble().operator_norm();
    let max_term = h.max_term_norm();
    let count = binomial(h.n_sites(), h.k());
    BoundReport::new(BoundId::KLocalNorm, norm, count * max_term)
        .with("max_term_norm", max_term)
        .with("binomial", count)
}

fn check_unitary(t: &TangentState, h: &HermitianOperator) -> Result<()> {
    if h.dim() != t.dim() {
        return Err(Error::dims(t.dim(), h.dim()));
    }
    let expected = h.unitary_derivative(t.rho().op());
    let gap = (t.drho() - &expected).trace_norm();
    if !(gap <= UNITARY_PRECONDITION_TOL) {
        return Err(Error::Precondition(format!(
            "tangent is not generated by H: ||d rho + i[H, rho]||_1 = {gap:e}"
        )));
    }
    Ok(())
}

/// Constants of the entanglement scaling bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingBoundParams {
    pub alpha_c: f64,
    pub alpha_q: f64,
    pub alpha_cq: f64,
    pub alpha_qq: f64,
    pub k: usize,
    pub n_sites: usize,
}

fn variance_qfi(psi: &CVector, h: &HermitianOperator) -> f64 {
    let hpsi = h.matrix() * psi;
    let mean = psi.dotc(&hpsi).re;
    let second = hpsi.norm_squared();
    (4.0 * (second - mean * mean)).max(0.0)
}

impl ScalingBoundParams {
    /// `alpha_CQ = alpha_C + alpha_Q`, `alpha_QQ = 208 max_term_norm^2`.
    pub fn new(alpha_c: f64, alpha_q: f64, max_term_norm: f64, k: usize, n_sites: usize) -> Result<Self> {
        if !(alpha_c >= 0.0 && alpha_q >= 0.0 && max_term_norm >= 0.0) || k == 0 || n_sites == 0 {
            return Err(Error::Domain("scaling constants must be nonnegative, k and N positive".into()));
        }
        Ok(Self {
            alpha_c,
            alpha_q,
            alpha_cq: alpha_c + alpha_q,
            alpha_qq: 208.0 * max_term_norm * max_term_norm,
            k,
            n_sites,
        })
    }

    /// Constants for a separable state whose components evolve under `h`.
    ///
    /// `alpha_C = F_C(q, dq) / N` (zero without weight derivatives). For
    /// `k = 1`, `alpha_Q` is the largest single-site QFI of any factor under its
    /// local generator; for `k >= 2` single sites have no generator of their
    /// own and `alpha_Q = max_a F(product_a) / N` under the full `H`.
    pub fn from_ansatz(
        ansatz: &SeparableAnsatz,
        h: &KLocalHamiltonian,
        weight_derivatives: Option<&[f64]>,
    ) -> Result<Self> {
        let n = h.n_sites();
        if ansatz.n_sites() != n || ansatz.local_dim() != h.local_dim() {
            return Err(Error::dims(h.dim(), ansatz.dim()));
        }
        let alpha_c = match weight_derivatives {
            Some(dq) => classical_fi(ansatz.weights(), dq)? / n as f64,
            None => 0.0,
        };
        let alpha_q = if h.k() == 1 {
            let mut local: BTreeMap<usize, HermitianOperator> = BTreeMap::new();
            for t in h.terms() {
                let e = local.entry(t.sites[0]).or_insert_with(|| HermitianOperator::zeros(h.local_dim()));
                *e = &*e + &t.op;
            }
            let mut best = 0.0f64;
            for comp in ansatz.factors() {
                for (j, g) in &local {
                    best = best.max(variance_qfi(&comp[*j], g));
                }
            }
            best
        } else {
            let full = h.assemble();
            (0..ansatz.n_components())
                .map(|a| variance_qfi(&ansatz.product_vector(a), &full))
                .fold(0.0, f64::max)
                / n as f64
        };
        Self::new(alpha_c, alpha_q, h.max_term_norm(), h.k(), n)
    }
}

/// The three entanglement scaling bounds on `F(rho)` for a tangent generated
/// by `h`: against `F(sigma*)`, against `alpha_CQ N`, and with the k-local
/// norm estimate.
pub fn scaling_bound(
    t_rho: &TangentState,
    h: &KLocalHamiltonian,
    params: &ScalingBoundParams,
    eg: f64,
    nu: f64,
    qfi_sigma_star: f64,
) -> Result<Vec<BoundReport>> {
    if params.n_sites != h.n_sites() || params.k != h.k() {
        return Err(Error::Precondition("scaling parameters do not match the Hamiltonian".into()));
    }
    if !(0.0..=1.0).contains(&eg) || !(nu >= 0.0) {
        return Err(Error::Domain("need eg in [0, 1] and nu >= 0".into()));
    }
    let hop = h.assemble();
    check_unitary(t_rho, &hop)?;
    let hn = hop.operator_norm();
    let lhs = qfi(t_rho);
    let n = params.n_sites as f64;
    let ent = 208.0 * nu * nu * hn * hn * eg.sqrt();
    let count = binomial(params.n_sites, params.k);
    let klocal = params.alpha_qq * count * count * nu * nu * eg.sqrt();
    let finish = |id, rhs| {
        BoundReport::new(id, lhs, rhs)
            .with("eg", eg)
            .with("nu", nu)
            .with("h_norm", hn)
            .with("qfi_sigma", qfi_sigma_star)
            .with("alpha_c", params.alpha_c)
            .with("alpha_q", params.alpha_q)
            .with("alpha_qq", params.alpha_qq)
            .with("n", n)
            .with("k", params.k as f64)
    };
    Ok(vec![
        finish(BoundId::ScalingSeparable, qfi_sigma_star + ent),
        finish(BoundId::ScalingLinear, params.alpha_cq * n + ent),
        finish(BoundId::ScalingKLocal, params.alpha_cq * n + klocal),
    ])
}
