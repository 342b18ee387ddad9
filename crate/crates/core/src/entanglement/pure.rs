use rayon::prelude::*;

use super::{sweep, SeparableAnsatz};
use crate::linalg::CVector;
use crate::seed::{derive_seed, rng_from_seed};
use crate::states::haar_vector;
use crate::{Error, Result, C64};

pub const DEFAULT_RESTARTS: usize = 32;
pub const MAX_SWEEPS: usize = 500;
/// Sweeps stop once the squared overlap changes by less than this.
pub const OVERLAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EgResult {
    /// `1 - max_fidelity_sq`, clamped to `[0, 1]`.
    pub eg: f64,
    pub best_ansatz: SeparableAnsatz,
    pub max_fidelity_sq: f64,
    pub restarts_used: usize,
    /// Whether the winning restart met [`OVERLAP_TOL`] before [`MAX_SWEEPS`].
    pub converged: bool,
}

fn check_pure(psi: &CVector, n_sites: usize, local_dim: usize) -> Result<()> {
    if n_sites == 0 || local_dim == 0 {
        return Err(Error::Domain("need at least one site of positive dimension".into()));
    }
    let dim = local_dim.checked_pow(n_sites as u32).unwrap_or(usize::MAX);
    if psi.len() != dim {
        return Err(Error::dims(dim, psi.len()));
    }
    if !((psi.norm() - 1.0).abs() <= 1e-10) {
        return Err(Error::Domain(format!("state vector has norm {}", psi.norm())));
    }
    Ok(())
}

/// Geometric entanglement of a pure state by alternating single-site power
/// iteration, best of `restarts` Haar-random product starts.
///
/// Restart `r` is seeded with `derive_seed(seed, r)`; restarts run in
/// parallel and ties go to the lowest index.
pub fn eg_pure(psi: &CVector, n_sites: usize, local_dim: usize, restarts: usize, seed: u64) -> Result<EgResult> {
    check_pure(psi, n_sites, local_dim)?;
    let restarts = restarts.max(1);
    let amps = psi.as_slice();
    let runs: Vec<(f64, Vec<CVector>, bool)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from_seed(derive_seed(seed, r as u64));
            let mut factors: Vec<CVector> = (0..n_sites).map(|_| haar_vector(local_dim, &mut rng)).collect();
            let mut prev = f64::NEG_INFINITY;
            let mut converged = false;
            for _ in 0..MAX_SWEEPS {
                let o = sweep(amps, &mut factors, local_dim);
                let o2 = o * o;
                if (o2 - prev).abs() < OVERLAP_TOL {
                    converged = true;
                    prev = o2;
                    break;
                }
                prev = o2;
            }
            (prev, factors, converged)
        })
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.0 > runs[best].0 {
            best = i;
        }
    }
    let (overlap_sq, factors, converged) = runs.into_iter().nth(best).expect("at least one restart");
    let max_fidelity_sq = overlap_sq.clamp(0.0, 1.0);
    Ok(EgResult {
        eg: 1.0 - max_fidelity_sq,
        best_ansatz: SeparableAnsatz::product(factors)?,
        max_fidelity_sq,
        restarts_used: restarts,
        converged,
    })
}

/// Two-qubit grid oracle: site 1 runs over a `grid x grid` lattice of Bloch
/// angles, site 2 is optimised exactly for each grid point.
pub fn eg_brute(psi: &CVector, grid: usize) -> Result<f64> {
    check_pure(psi, 2, 2)?;
    if grid < 2 {
        return Err(Error::Domain("grid needs at least two points per angle".into()));
    }
    let mut best = 0.0f64;
    for it in 0..grid {
        let theta = std::f64::consts::PI * it as f64 / (grid - 1) as f64;
        for ip in 0..grid {
            let phi = 2.0 * std::f64::consts::PI * ip as f64 / grid as f64;
            let a0 = C64::new((theta / 2.0).cos(), 0.0);
            let a1 = C64::from_polar((theta / 2.0).sin(), phi);
            let c0 = a0.conj() * psi[0] + a1.conj() * psi[2];
            let c1 = a0.conj() * psi[1] + a1.conj() * psi[3];
            best = best.max(c0.norm_sqr() + c1.norm_sqr());
        }
    }
    Ok((1.0 - best).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::product_vector;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn product_state_has_no_entanglement() {
        let mut rng = rng_from_seed(3);
        let psi = product_vector(&[haar_vector(2, &mut rng), haar_vector(2, &mut rng)]);
        let r = eg_pure(&psi, 2, 2, 8, 1).unwrap();
        assert!(r.eg <= 1e-10 && r.converged);
        assert!(eg_brute(&psi, 60).unwrap() <= 0.01);
    }

    #[test]
    fn bell_and_w() {
        let s = 0.5f64.sqrt();
        let bell = CVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]);
        assert!((eg_pure(&bell, 2, 2, DEFAULT_RESTARTS, 7).unwrap().eg - 0.5).abs() < 1e-6);
        assert!((eg_brute(&bell, 60).unwrap() - 0.5).abs() < 0.01);
        let t = 1.0 / 3f64.sqrt();
        let mut w = CVector::zeros(8);
        for i in [1, 2, 4] {
            w[i] = c(t);
        }
        let r = eg_pure(&w, 3, 2, DEFAULT_RESTARTS, 7).unwrap();
        assert!((r.eg - 5.0 / 9.0).abs() < 1e-6, "{}", r.eg);
        assert!((r.eg - (1.0 - r.max_fidelity_sq)).abs() <= 1e-12);
    }

    #[test]
    fn single_site_is_trivial() {
        let mut rng = rng_from_seed(9);
        let psi = haar_vector(4, &mut rng);
        assert!(eg_pure(&psi, 1, 4, 2, 0).unwrap().eg < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let v = CVector::from_vec(vec![c(1.0), c(0.0), c(0.0)]);
        assert!(eg_pure(&v, 2, 2, 1, 0).is_err());
        assert!(eg_brute(&v, 10).is_err());
        let unnormalised = CVector::from_vec(vec![c(1.0), c(1.0), c(0.0), c(0.0)]);
        assert!(eg_pure(&unnormalised, 2, 2, 1, 0).is_err());
    }
}
