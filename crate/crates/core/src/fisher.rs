//! Symmetric logarithmic derivative solvers, quantum and classical Fisher
//! information, Cramer-Rao bounds and the extended-convexity cross-check.
//!
//! The SLD is normalised so that `d rho = (L rho + rho L) / 2` holds exactly,
//! which makes the integral form `L = 2 int_0^inf e^{-s rho} d rho e^{-s rho} ds`.

use num_complex::Complex64;

use crate::linalg::{gauss_legendre, trace_norm, CMatrix, CVector, HermitianOperator};
use crate::report::{BoundId, BoundReport};
use crate::states::{DensityMatrix, Povm, TangentState};
use crate::{Error, Result};

/// Relative eigenvalue-sum cutoff used by [`qfi`].
pub const DEFAULT_CUTOFF: f64 = 1e-10;
/// Truncation target for the default `s_max` of [`sld_integral`].
pub const INTEGRAL_TAIL_EPS: f64 = 1e-10;
/// Gauss-Legendre nodes per panel in [`sld_integral`].
pub const DEFAULT_PANEL_NODES: usize = 32;

/// An SLD together with the trace-norm mismatch of its defining equation.
#[derive(Debug, Clone)]
pub struct SldResult {
    pub sld: HermitianOperator,
    /// Number of eigenvalues of `rho` treated as inside the support.
    pub support_dim: usize,
    /// `||d rho - (L rho + rho L) / 2||_1`.
    pub residual: f64,
}

/// `||d rho - (L rho + rho L) / 2||_1`.
pub fn sld_residual(t: &TangentState, sld: &HermitianOperator) -> f64 {
    let rho = t.rho().matrix();
    let l = sld.matrix();
    let anti = (l * rho + rho * l).scale(0.5);
    trace_norm(&(t.drho().matrix() - anti))
}

/// Solves the SLD equation in the eigenbasis of `rho`:
/// `L_ij = 2 (d rho)_ij / (lambda_i + lambda_j)`.
///
/// Entries with `lambda_i + lambda_j <= cutoff * lambda_max` are set to zero,
/// which fixes the SLD on the kernel of a rank-deficient `rho`.
pub fn sld_spectral(t: &TangentState, cutoff: f64) -> Result<SldResult> {
    if !(cutoff > 0.0) {
        return Err(Error::Domain(format!("SLD cutoff must be positive, got {cutoff}")));
    }
    let spec = t.rho().spectrum();
    let lam: Vec<f64> = t.rho().eigenvalues();
    let threshold = cutoff * t.rho().lambda_max();
    let d = spec.to_eigenbasis(t.drho().matrix());
    let n = t.dim();
    let mut l = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s = lam[i] + lam[j];
            if s > threshold {
                l[(i, j)] = d[(i, j)] * (2.0 / s);
            }
        }
    }
    let sld = HermitianOperator::hermitian_part(&spec.from_eigenbasis(&l));
    let support_dim = lam.iter().filter(|&&x| 2.0 * x > threshold).count();
    let residual = sld_residual(t, &sld);
    Ok(SldResult { sld, support_dim, residual })
}

/// `s_max = ln(||d rho||_inf / (eps lambda_min)) / (2 lambda_min)`, so that the
/// neglected tail `||d rho||_inf e^{-2 s_max lambda_min} / lambda_min` is `eps`.
pub fn default_s_max(t: &TangentState) -> Result<f64> {
    let lmin = t.rho().lambda_min();
    if !(lmin > 0.0) {
        return Err(Error::Precondition("the SLD integral needs a full-rank state".into()));
    }
    let dn = t.drho().operator_norm();
    let s = (dn / (INTEGRAL_TAIL_EPS * lmin)).ln() / (2.0 * lmin);
    Ok(s.max(1.0 / lmin))
}

/// Quadrature of `L = 2 int_0^{s_max} e^{-s rho} d rho e^{-s rho} ds`.
///
/// Plain Gauss-Legendre with `nodes` points on each panel of a geometric
/// partition `[0, h], [h, 2h], [2h, 4h], ...` of `[0, s_max]`, where
/// `h = 1 / (2 lambda_max)`. The integrand is evaluated in the eigenbasis of
/// `rho`, where `e^{-s rho} d rho e^{-s rho}` has entries
/// `e^{-s (lambda_i + lambda_j)} (d rho)_ij`.
pub fn sld_integral(t: &TangentState, s_max: f64, nodes: usize) -> Result<SldResult> {
    let lmin = t.rho().lambda_min();
    if !(lmin > 0.0) {
        return Err(Error::Precondition("the SLD integral diverges for a singular state".into()));
    }
    if !(s_max > 0.0) || nodes == 0 {
        return Err(Error::Domain("s_max and the node count must be positive".into()));
    }
    let spec = t.rho().spectrum();
    let lam = t.rho().eigenvalues();
    let n = t.dim();
    let rule = gauss_legendre(nodes);
    let h0 = (0.5 / t.rho().lambda_max()).min(s_max);
    let mut panels = vec![(0.0, h0)];
    let mut a = h0;
    while a < s_max {
        let b = (2.0 * a).min(s_max);
        panels.push((a, b));
        a = b;
    }
    let d = spec.to_eigenbasis(t.drho().matrix());
    let mut l = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let rate = lam[i] + lam[j];
            let mut acc = 0.0;
            for &(a, b) in &panels {
                acc += rule.on_interval(a, b).map(|(s, w)| w * (-s * rate).exp()).sum::<f64>();
            }
            l[(i, j)] = d[(i, j)] * (2.0 * acc);
            l[(j, i)] = d[(j, i)] * (2.0 * acc);
        }
    }
    let sld = HermitianOperator::hermitian_part(&spec.from_eigenbasis(&l));
    let residual = sld_residual(t, &sld);
    Ok(SldResult { sld, support_dim: n, residual })
}

/// [`sld_integral`] with [`default_s_max`] and [`DEFAULT_PANEL_NODES`].
pub fn sld_integral_default(t: &TangentState) -> Result<SldResult> {
    sld_integral(t, default_s_max(t)?, DEFAULT_PANEL_NODES)
}

/// `Tr[rho L^2]` for a given SLD.
pub fn qfi_from_sld(rho: &DensityMatrix, sld: &HermitianOperator) -> f64 {
    let l = sld.matrix();
    (rho.matrix() * l * l).trace().re.max(0.0)
}

/// Quantum Fisher information `Tr[rho L^2]` with the spectral SLD.
pub fn qfi(t: &TangentState) -> f64 {
    let r = sld_spectral(t, DEFAULT_CUTOFF).expect("default cutoff is positive");
    qfi_from_sld(t.rho(), &r.sld)
}

/// `4 (<d psi|d psi> - |<psi|d psi>|^2)` for a normalised pure state.
pub fn qfi_pure_oracle(psi: &CVector, dpsi: &CVector) -> Result<f64> {
    if psi.len() != dpsi.len() {
        return Err(Error::dims(psi.len(), dpsi.len()));
    }
    let norm = psi.norm();
    if !((norm - 1.0).abs() <= 1e-10) {
        return Err(Error::Domain(format!("state vector has norm {norm}, expected 1")));
    }
    let overlap = psi.dotc(dpsi);
    Ok((4.0 * (dpsi.norm_squared() - overlap.norm_sqr())).max(0.0))
}

/// Tangent of `|psi><psi|` along `|d psi>`: `|d psi><psi| + |psi><d psi|`.
pub fn pure_tangent(psi: &CVector, dpsi: &CVector) -> Result<TangentState> {
    if psi.len() != dpsi.len() {
        return Err(Error::dims(psi.len(), dpsi.len()));
    }
    let rho = DensityMatrix::pure(psi)?;
    let m = dpsi * psi.adjoint() + psi * dpsi.adjoint();
    TangentState::new(rho, HermitianOperator::hermitian_part(&m))
}

/// `sum_i (dp_i)^2 / p_i`. Outcomes with `p_i <= 1e-15` are dropped when
/// `|dp_i| <= 1e-12` and rejected otherwise.
pub fn classical_fi(p: &[f64], dp: &[f64]) -> Result<f64> {
    if p.len() != dp.len() {
        return Err(Error::dims(p.len(), dp.len()));
    }
    if p.iter().any(|&x| !(x >= -1e-15)) {
        return Err(Error::Domain("probabilities must be nonnegative".into()));
    }
    let total: f64 = p.iter().sum();
    if !((total - 1.0).abs() <= 1e-9) {
        return Err(Error::Domain(format!("probabilities sum to {total}, not 1")));
    }
    let dsum: f64 = dp.iter().sum();
    let dscale = dp.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    if !(dsum.abs() <= 1e-9 * dscale) {
        return Err(Error::Domain(format!("derivatives sum to {dsum:e}, not 0")));
    }
    let mut fi = 0.0;
    for (&pi, &dpi) in p.iter().zip(dp) {
        if pi <= 1e-15 {
            if dpi.abs() > 1e-12 {
                return Err(Error::Domain(format!(
                    "outcome with probability {pi:e} has derivative {dpi:e}"
                )));
            }
            continue;
        }
        fi += dpi * dpi / pi;
    }
    Ok(fi)
}

/// Classical Fisher information of the Born-rule outcome distribution.
pub fn povm_cfi(t: &TangentState, m: &Povm) -> Result<f64> {
    if m.dim() != t.dim() {
        return Err(Error::dims(t.dim(), m.dim()));
    }
    let born = |a: &CMatrix, e: &HermitianOperator| -> f64 { (a * e.matrix()).trace().re };
    let p: Vec<f64> = m.effects().iter().map(|e| born(t.rho().matrix(), e)).collect();
    let dp: Vec<f64> = m.effects().iter().map(|e| born(t.drho().matrix(), e)).collect();
    classical_fi(&p, &dp)
}

/// Cramer-Rao lower bound on the estimation error after `repetitions` rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbResult {
    pub fisher_value: f64,
    pub repetitions: u64,
    /// `(M F)^{-1/2}`; `+inf` when `F = 0`.
    pub delta_x_lower: f64,
}

impl CrbResult {
    pub fn is_unbounded(&self) -> bool {
        self.delta_x_lower.is_infinite()
    }
}

pub fn cramer_rao(fisher_value: f64, repetitions: u64) -> Result<CrbResult> {
    if !(fisher_value >= 0.0) || repetitions == 0 {
        return Err(Error::Domain("need fisher_value >= 0 and at least one repetition".into()));
    }
    let delta_x_lower = if fisher_value == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (repetitions as f64 * fisher_value).sqrt()
    };
    Ok(CrbResult { fisher_value, repetitions, delta_x_lower })
}

/// `F_Q(sum_a p_a rho_a) <= F_C({p_a}) + sum_a p_a F_Q(rho_a)`, where the
/// mixture's derivative is `sum_a (dp_a rho_a + p_a d rho_a)`.
pub fn extended_convexity_gap(components: &[(f64, TangentState)], dweights: &[f64]) -> Result<BoundReport> {
    if components.is_empty() || components.len() != dweights.len() {
        return Err(Error::dims(components.len(), dweights.len()));
    }
    let weights: Vec<f64> = components.iter().map(|(w, _)| *w).collect();
    crate::states::check_weights(&weights)?;
    let dim = components[0].1.dim();
    let mut rho = CMatrix::zeros(dim, dim);
    let mut drho = CMatrix::zeros(dim, dim);
    for ((w, t), dw) in components.iter().zip(dweights) {
        if t.dim() != dim {
            return Err(Error::dims(dim, t.dim()));
        }
        rho += t.rho().matrix() * Complex64::new(*w, 0.0);
        drho += t.rho().matrix() * Complex64::new(*dw, 0.0) + t.drho().matrix() * Complex64::new(*w, 0.0);
    }
    let mix = TangentState::new(
        DensityMatrix::new(HermitianOperator::hermitian_part(&rho))?,
        HermitianOperator::hermitian_part(&drho),
    )?;
    let lhs = qfi(&mix);
    let f_classical = classical_fi(&weights, dweights)?;
    let f_components: f64 = components.iter().map(|(w, t)| w * qfi(t)).sum();
    Ok(BoundReport::new(BoundId::ExtendedConvexity, lhs, f_classical + f_components)
        .with("classical_fi", f_classical)
        .with("mean_component_qfi", f_components))
}

/// `|F_Q(rho1 (x) rho2) - F_Q(rho1) - F_Q(rho2)| <= 1e-8 max(1, F_Q(rho1) + F_Q(rho2))`.
pub fn qfi_additivity_check(t1: &TangentState, t2: &TangentState) -> Result<BoundReport> {
    let prod = t1.product(t2)?;
    let f1 = qfi(t1);
    let f2 = qfi(t2);
    let f12 = qfi(&prod);
    let rhs = 1e-8 * (f1 + f2).max(1.0);
    Ok(BoundReport::new(BoundId::QfiAdditivity, (f12 - f1 - f2).abs(), rhs)
        .with("qfi_product", f12)
        .with("qfi_first", f1)
        .with("qfi_second", f2))
}
