use rayon::prelude::*;

use super::{sweep, SeparableAnsatz};
use crate::linalg::{svd, trace_norm, CMatrix, CVector};
use crate::seed::{derive_seed, rng_from_seed};
use crate::states::{fidelity, haar_vector, DensityMatrix};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeeSawOptions {
    pub n_components: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Iteration stops once the fidelity gains less than this.
    pub tolerance: f64,
}

impl SeeSawOptions {
    /// `2 dim` components, 4 restarts, 500 iterations.
    pub fn for_dim(dim: usize) -> Self {
        Self { n_components: 2 * dim, restarts: 4, max_iterations: 500, tolerance: 1e-12 }
    }
}

#[derive(Debug, Clone)]
pub struct SeparableFit {
    pub ansatz: SeparableAnsatz,
    /// `F(rho, sigma)` for the returned ansatz: a lower bound on the maximum
    /// over separable states.
    pub fidelity: f64,
    /// Fidelity before each iteration of the winning restart, then the final value.
    pub history: Vec<f64>,
    pub converged: bool,
    pub restarts_used: usize,
}

impl SeparableFit {
    /// `1 - F^2`, an upper bound on the geometric entanglement.
    pub fn eg_upper_bound(&self) -> f64 {
        (1.0 - self.fidelity * self.fidelity).clamp(0.0, 1.0)
    }
}

struct Run {
    weights: Vec<f64>,
    factors: Vec<Vec<CVector>>,
    history: Vec<f64>,
    converged: bool,
}

fn factor_matrix(weights: &[f64], factors: &[Vec<CVector>]) -> CMatrix {
    let cols: Vec<CVector> = weights
        .iter()
        .zip(factors)
        .map(|(w, f)| super::product_vector(f).scale(w.sqrt()))
        .collect();
    CMatrix::from_columns(&cols)
}

fn see_saw(sqrt_rho: &CMatrix, n_sites: usize, d: usize, opts: &SeeSawOptions, seed: u64) -> Run {
    let mut rng = rng_from_seed(seed);
    let k = opts.n_components;
    let mut factors: Vec<Vec<CVector>> =
        (0..k).map(|_| (0..n_sites).map(|_| haar_vector(d, &mut rng)).collect()).collect();
    let mut weights = vec![1.0 / k as f64; k];
    let mut history = Vec::new();
    let mut converged = false;
    for _ in 0..opts.max_iterations {
        // F = ||sqrt(rho) B||_1 with sigma = B B^dagger; V is the polar factor.
        let dec = svd(&(sqrt_rho * factor_matrix(&weights, &factors)));
        let f: f64 = dec.s.iter().sum();
        if let Some(&last) = history.last() {
            if f - last < opts.tolerance {
                history.push(f);
                converged = true;
                break;
            }
        }
        history.push(f);
        let chi = sqrt_rho * dec.polar_factor();
        let mut overlaps = Vec::with_capacity(k);
        for (a, comp) in factors.iter_mut().enumerate() {
            let col: Vec<C64> = chi.column(a).iter().copied().collect();
            overlaps.push(sweep(&col, comp, d));
        }
        let norm2: f64 = overlaps.iter().map(|c| c * c).sum();
        if norm2 > 0.0 {
            weights = overlaps.iter().map(|c| c * c / norm2).collect();
        }
    }
    if !converged {
        history.push(trace_norm(&(sqrt_rho * factor_matrix(&weights, &factors))));
    }
    Run { weights, factors, history, converged }
}

/// See-saw ascent of `F(rho, sigma)` over separable `sigma` with
/// `n_components` product components.
///
/// Each iteration fixes the polar factor `V` of `sqrt(rho) B`, then raises
/// `Re Tr[V^dagger sqrt(rho) B]` by one alternating sweep per component and
/// the closed-form optimal weights; the fidelity never decreases.
pub fn closest_separable_with(
    rho: &DensityMatrix,
    n_sites: usize,
    local_dim: usize,
    opts: &SeeSawOptions,
    seed: u64,
) -> Result<SeparableFit> {
    let dim = local_dim.checked_pow(n_sites as u32).unwrap_or(usize::MAX);
    if n_sites == 0 || rho.dim() != dim {
        return Err(Error::dims(dim, rho.dim()));
    }
    if opts.n_components == 0 {
        return Err(Error::Domain("need at least one component".into()));
    }
    let sqrt_rho = rho.sqrt().into_matrix();
    let restarts = opts.restarts.max(1);
    let runs: Vec<Run> = (0..restarts)
        .into_par_iter()
        .map(|r| see_saw(&sqrt_rho, n_sites, local_dim, opts, derive_seed(seed, r as u64)))
        .collect();
    let score = |r: &Run| *r.history.last().expect("history is never empty");
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if score(run) > score(&runs[best]) {
            best = i;
        }
    }
    let run = runs.into_iter().nth(best).expect("at least one restart");
    let total: f64 = run.weights.iter().sum();
    let weights: Vec<f64> = run.weights.iter().map(|w| w / total).collect();
    let ansatz = SeparableAnsatz::new(weights, run.factors)?;
    let fidelity = fidelity(rho, &ansatz.density()?)?;
    Ok(SeparableFit { ansatz, fidelity, history: run.history, converged: run.converged, restarts_used: restarts })
}

pub fn closest_separable(
    rho: &DensityMatrix,
    n_sites: usize,
    local_dim: usize,
    n_components: usize,
    restarts: usize,
    seed: u64,
) -> Result<SeparableFit> {
    let opts = SeeSawOptions { n_components, restarts, ..SeeSawOptions::for_dim(rho.dim()) };
    closest_separable_with(rho, n_sites, local_dim, &opts, seed)
}
