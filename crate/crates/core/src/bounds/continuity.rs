use serde::Serialize;

use crate::fisher::{qfi_from_sld, sld_spectral, DEFAULT_CUTOFF};
use crate::linalg::{herm_exp, HermitianOperator};
use crate::report::{BoundId, BoundReport};
use crate::states::{phase_channel, trace_distance, DensityMatrix, TangentState};
use crate::{Error, Result};

/// Evaluators refuse states whose smallest eigenvalue is below this.
pub const DEFAULT_LAMBDA_FLOOR: f64 = 1e-8;

/// Which printed form of an SLD continuity bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Explicit in `lambda_min(rho)` and `lambda_min(sigma)`.
    Tight,
    /// Uses `nu = lambda_min(rho)^-4 lambda_min(sigma)^-4`.
    Loose,
}

/// Scalars shared by every two-state bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairScalars {
    pub lambda_rho: f64,
    pub lambda_sigma: f64,
    pub nu: f64,
    /// `||rho - sigma||_1`
    pub dist: f64,
    /// `||d rho||_inf`
    pub drho: f64,
    /// `||d sigma||_inf`
    pub dsigma: f64,
    /// `||d rho - d sigma||_inf`
    pub ddiff: f64,
}

impl PairScalars {
    pub fn annotate(&self, r: BoundReport) -> BoundReport {
        r.with("lambda_min_rho", self.lambda_rho)
            .with("lambda_min_sigma", self.lambda_sigma)
            .with("nu", self.nu)
            .with("trace_dist", self.dist)
            .with("drho_norm", self.drho)
            .with("dsigma_norm", self.dsigma)
            .with("ddiff_norm", self.ddiff)
    }
}

/// Coefficients `f_1..f_4`, `g_1`, `g_2` of the QFI continuity bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityCoefficients {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    pub g1: f64,
    pub g2: f64,
}

impl ContinuityCoefficients {
    /// The coefficient formulas as printed, including the doubled
    /// `||d sigma||` inside `f2`.
    pub fn from_norms(nu: f64, dsigma: f64, drho: f64, ddiff: f64) -> Self {
        Self {
            f1: 2.0 * nu * (dsigma * ddiff + dsigma * dsigma + 2.0 * drho * drho),
            f2: nu * dsigma * (dsigma + dsigma + ddiff),
            f3: 0.5 * nu * dsigma * dsigma,
            f4: 0.25 * nu * dsigma * dsigma,
            g1: 2.0 * nu * dsigma,
            g2: nu,
        }
    }

    pub fn f(&self) -> [f64; 4] {
        [self.f1, self.f2, self.f3, self.f4]
    }

    pub fn f_sum(&self) -> f64 {
        self.f().iter().sum()
    }

    /// `g_1 x + g_2 x^2`.
    pub fn derivative_terms(&self, ddiff: f64) -> f64 {
        self.g1 * ddiff + self.g2 * ddiff * ddiff
    }

    /// `sum_m f_m D^m + sum_n g_n x^n`.
    pub fn rhs(&self, dist: f64, ddiff: f64) -> f64 {
        let poly = self.f().iter().rev().fold(0.0, |acc, f| (acc + f) * dist);
        poly + self.derivative_terms(ddiff)
    }
}

/// Bound evaluators with a configurable full-rank guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluator {
    pub lambda_floor: f64,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self { lambda_floor: DEFAULT_LAMBDA_FLOOR }
    }
}

struct SldPair {
    scalars: PairScalars,
    l_rho: HermitianOperator,
    l_sigma: HermitianOperator,
    qfi_rho: f64,
    qfi_sigma: f64,
    l_diff: f64,
}

fn opnorm(a: &HermitianOperator) -> f64 {
    a.operator_norm()
}

impl Evaluator {
    pub fn new(lambda_floor: f64) -> Self {
        Self { lambda_floor }
    }

    pub fn guard(&self, rho: &DensityMatrix) -> Result<f64> {
        let l = rho.lambda_min();
        if !(l >= self.lambda_floor) {
            return Err(Error::Singular { lambda_min: l, floor: self.lambda_floor });
        }
        Ok(l)
    }

    pub fn pair_scalars(&self, t_rho: &TangentState, t_sigma: &TangentState) -> Result<PairScalars> {
        let lambda_rho = self.guard(t_rho.rho())?;
        let lambda_sigma = self.guard(t_sigma.rho())?;
        let dist = trace_distance(t_rho.rho(), t_sigma.rho())?;
        Ok(PairScalars {
            lambda_rho,
            lambda_sigma,
            nu: (lambda_rho * lambda_sigma).powi(-4),
            dist,
            drho: opnorm(t_rho.drho()),
            dsigma: opnorm(t_sigma.drho()),
            ddiff: opnorm(&(t_rho.drho() - t_sigma.drho())),
        })
    }

    fn sld_pair(&self, t_rho: &TangentState, t_sigma: &TangentState) -> Result<SldPair> {
        let scalars = self.pair_scalars(t_rho, t_sigma)?;
        let l_rho = sld_spectral(t_rho, DEFAULT_CUTOFF)?.sld;
        let l_sigma = sld_spectral(t_sigma, DEFAULT_CUTOFF)?.sld;
        let l_diff = opnorm(&(&l_rho - &l_sigma));
        Ok(SldPair {
            scalars,
            qfi_rho: qfi_from_sld(t_rho.rho(), &l_rho),
            qfi_sigma: qfi_from_sld(t_sigma.rho(), &l_sigma),
            l_rho,
            l_sigma,
            l_diff,
        })
    }

    /// `||e^{-s rho} - e^{-s sigma}||_inf` against the closed-form integral
    /// bound; the `lambda_min(rho) = lambda_min(sigma)` limit `s e^{-s lambda}`
    /// is used when the eigenvalues differ by less than `1e-10`.
    pub fn exp_diff_bound(&self, rho: &DensityMatrix, sigma: &DensityMatrix, s: f64) -> Result<BoundReport> {
        if !(s >= 0.0) {
            return Err(Error::Domain(format!("s must be nonnegative, got {s}")));
        }
        let lr = self.guard(rho)?;
        let ls = self.guard(sigma)?;
        let dist = trace_distance(rho, sigma)?;
        let lhs = opnorm(&(&herm_exp(rho.op(), -s) - &herm_exp(sigma.op(), -s)));
        let coeff = exp_diff_coefficient(lr, ls, s);
        Ok(BoundReport::new(BoundId::ExpDifference, lhs, coeff * dist)
            .with("s", s)
            .with("lambda_min_rho", lr)
            .with("lambda_min_sigma", ls)
            .with("trace_dist", dist))
    }

    /// `||L||_inf <= ||d rho||_inf / lambda_min(rho)`.
    pub fn sld_norm_bound(&self, t: &TangentState) -> Result<BoundReport> {
        let l = self.guard(t.rho())?;
        let sld = sld_spectral(t, DEFAULT_CUTOFF)?.sld;
        let d = opnorm(t.drho());
        Ok(BoundReport::new(BoundId::SldNorm, opnorm(&sld), d / l)
            .with("lambda_min_rho", l)
            .with("drho_norm", d))
    }

    pub fn sld_continuity_bound(
        &self,
        t_rho: &TangentState,
        t_sigma: &TangentState,
        variant: Variant,
    ) -> Result<BoundReport> {
        let p = self.sld_pair(t_rho, t_sigma)?;
        Ok(sld_continuity_report(&p, variant))
    }

    pub fn continuity_coefficients(
        &self,
        t_rho: &TangentState,
        t_sigma: &TangentState,
    ) -> Result<ContinuityCoefficients> {
        let s = self.pair_scalars(t_rho, t_sigma)?;
        Ok(ContinuityCoefficients::from_norms(s.nu, s.dsigma, s.drho, s.ddiff))
    }

    /// `|F(rho) - F(sigma)|` against the polynomial bound; the intermediate
    /// SLD-level bound is kept in the context under `chain_rhs`.
    pub fn qfi_continuity_bound(&self, t_rho: &TangentState, t_sigma: &TangentState) -> Result<BoundReport> {
        let p = self.sld_pair(t_rho, t_sigma)?;
        Ok(qfi_continuity_report(&p))
    }

    /// `|F(rho) - F(sigma)| <= ||dL|| (||dL|| + 2 ||L_sigma||) + ||L_rho||^2 ||rho - sigma||_1`.
    pub fn qfi_continuity_chain(&self, t_rho: &TangentState, t_sigma: &TangentState) -> Result<BoundReport> {
        let p = self.sld_pair(t_rho, t_sigma)?;
        Ok(chain_report(&p))
    }

    /// Tight, loose, dominance, chain and polynomial reports from one pair of
    /// SLD solves.
    pub fn continuity_suite(&self, t_rho: &TangentState, t_sigma: &TangentState) -> Result<Vec<BoundReport>> {
        let p = self.sld_pair(t_rho, t_sigma)?;
        let tight = sld_continuity_report(&p, Variant::Tight);
        let loose = sld_continuity_report(&p, Variant::Loose);
        let dominance = BoundReport::new(BoundId::SldContinuityDominance, tight.rhs, loose.rhs);
        Ok(vec![tight, loose, dominance, chain_report(&p), qfi_continuity_report(&p)])
    }

    /// Both tangents come from `e^{-ixH} . e^{ixH}`; the trace distance at `x`
    /// is compared with the one at `x = 0` under `invariance_gap`.
    pub fn unitary_sld_bound(
        &self,
        rho0: &DensityMatrix,
        sigma0: &DensityMatrix,
        h: &HermitianOperator,
        x: f64,
        variant: Variant,
    ) -> Result<BoundReport> {
        Ok(self.unitary_suite(rho0, sigma0, h, x)?.swap_remove(match variant {
            Variant::Tight => 0,
            Variant::Loose => 1,
        }))
    }

    /// `[tight, loose]` unitary SLD reports.
    pub fn unitary_suite(
        &self,
        rho0: &DensityMatrix,
        sigma0: &DensityMatrix,
        h: &HermitianOperator,
        x: f64,
    ) -> Result<Vec<BoundReport>> {
        let d0 = trace_distance(rho0, sigma0)?;
        let t_rho = phase_channel(rho0, h, x)?;
        let t_sigma = phase_channel(sigma0, h, x)?;
        let p = self.sld_pair(&t_rho, &t_sigma)?;
        let s = p.scalars;
        let hn = opnorm(h);
        let (lr, ls, d) = (s.lambda_rho, s.lambda_sigma, s.dist);
        let denom = lr * ls * (lr + ls);
        let tight = 2.0 * hn * d * (ls * (lr + ls) + 2.0 * lr + d) / denom;
        let loose = s.nu * hn * d * (4.0 + d);
        let finish = |id, rhs| {
            s.annotate(BoundReport::new(id, p.l_diff, rhs))
                .with("x", x)
                .with("h_norm", hn)
                .with("trace_dist_initial", d0)
                .with("invariance_gap", (d - d0).abs())
        };
        Ok(vec![finish(BoundId::UnitarySldTight, tight), finish(BoundId::UnitarySldLoose, loose)])
    }
}

/// `(e^{-s l_sigma} - e^{-s l_rho}) / (l_rho - l_sigma)`, written with
/// `expm1` so that nearly equal eigenvalues do not cancel.
fn exp_diff_coefficient(lr: f64, ls: f64, s: f64) -> f64 {
    let delta = lr - ls;
    if delta.abs() < 1e-10 {
        let l = 0.5 * (lr + ls);
        return s * (-s * l).exp();
    }
    (-s * ls).exp() * -(-s * delta).exp_m1() / delta
}

fn sld_continuity_report(p: &SldPair, variant: Variant) -> BoundReport {
    let s = &p.scalars;
    let derivative_term = s.ddiff / s.lambda_rho;
    let (id, rhs) = match variant {
        Variant::Tight => {
            let denom = s.lambda_rho * s.lambda_sigma * (s.lambda_rho + s.lambda_sigma);
            (BoundId::SldContinuityTight, s.dsigma * (2.0 * s.lambda_rho + s.dist) / denom * s.dist + derivative_term)
        }
        Variant::Loose => (
            BoundId::SldContinuityLoose,
            0.5 * s.nu * s.dsigma * (2.0 + s.dist) * s.dist + derivative_term,
        ),
    };
    s.annotate(BoundReport::new(id, p.l_diff, rhs))
}

fn chain_rhs(p: &SldPair) -> f64 {
    let ls = opnorm(&p.l_sigma);
    let lr = opnorm(&p.l_rho);
    p.l_diff * (p.l_diff + 2.0 * ls) + lr * lr * p.scalars.dist
}

fn chain_report(p: &SldPair) -> BoundReport {
    let lhs = (p.qfi_rho - p.qfi_sigma).abs();
    p.scalars
        .annotate(BoundReport::new(BoundId::QfiContinuityChain, lhs, chain_rhs(p)))
        .with("sld_diff_norm", p.l_diff)
}

fn qfi_continuity_report(p: &SldPair) -> BoundReport {
    let s = &p.scalars;
    let c = ContinuityCoefficients::from_norms(s.nu, s.dsigma, s.drho, s.ddiff);
    let lhs = (p.qfi_rho - p.qfi_sigma).abs();
    s.annotate(BoundReport::new(BoundId::QfiContinuity, lhs, c.rhs(s.dist, s.ddiff)))
        .with("qfi_rho", p.qfi_rho)
        .with("qfi_sigma", p.qfi_sigma)
        .with("chain_rhs", chain_rhs(p))
        .with("f1", c.f1)
        .with("f2", c.f2)
        .with("f3", c.f3)
        .with("f4", c.f4)
        .with("g1", c.g1)
        .with("g2", c.g2)
}

pub fn exp_diff_bound(rho: &DensityMatrix, sigma: &DensityMatrix, s: f64) -> Result<BoundReport> {
    Evaluator::default().exp_diff_bound(rho, sigma, s)
}

pub fn sld_norm_bound(t: &TangentState) -> Result<BoundReport> {
    Evaluator::default().sld_norm_bound(t)
}

pub fn sld_continuity_bound(t_rho: &TangentState, t_sigma: &TangentState, variant: Variant) -> Result<BoundReport> {
    Evaluator::default().sld_continuity_bound(t_rho, t_sigma, variant)
}

pub fn continuity_coefficients(t_rho: &TangentState, t_sigma: &TangentState) -> Result<ContinuityCoefficients> {
    Evaluator::default().continuity_coefficients(t_rho, t_sigma)
}

pub fn qfi_continuity_bound(t_rho: &TangentState, t_sigma: &TangentState) -> Result<BoundReport> {
    Evaluator::default().qfi_continuity_bound(t_rho, t_sigma)
}

pub fn qfi_continuity_chain(t_rho: &TangentState, t_sigma: &TangentState) -> Result<BoundReport> {
    Evaluator::default().qfi_continuity_chain(t_rho, t_sigma)
}

pub fn continuity_suite(t_rho: &TangentState, t_sigma: &TangentState) -> Result<Vec<BoundReport>> {
    Evaluator::default().continuity_suite(t_rho, t_sigma)
}

pub fn unitary_sld_bound(
    rho0: &DensityMatrix,
    sigma0: &DensityMatrix,
    h: &HermitianOperator,
    x: f64,
    variant: Variant,
) -> Result<BoundReport> {
    Evaluator::default().unitary_sld_bound(rho0, sigma0, h, x, variant)
}
