use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, Povm, TangentState};
use crate::linalg::{eigh, CMatrix, CVector, HermitianOperator};
use crate::seed::rng_from_seed;
use crate::{Error, Result};

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Ginibre matrix with i.i.d. standard normal real and imaginary parts.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unit vector.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| complex_normal(rng));
        let n = v.norm();
        if n > 1e-300 {
            return v.unscale(n);
        }
    }
}

/// Rank-one projector onto a Haar-random vector.
pub fn sample_pure_haar(dim: usize, seed: u64) -> DensityMatrix {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = rng_from_seed(seed);
    DensityMatrix::pure(&haar_vector(dim, &mut rng)).expect("Haar vector gives a valid state")
}

/// `G G^dagger / Tr[G G^dagger]` with `G` a `dim x rank` Ginibre matrix.
/// At full rank a draw with `lambda_min <= 1e-8` is replaced by a fresh one.
pub fn ginibre_with_rng<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::Domain(format!("rank {rank} outside [1, {dim}]")));
    }
    for _ in 0..64 {
        let g = random_matrix(dim, rank, rng);
        let w = &g * g.adjoint();
        let tr = w.trace().re;
        let rho = DensityMatrix::new(HermitianOperator::hermitian_part(&w.unscale(tr)))?;
        if rank < dim || rho.lambda_min() > 1e-8 {
            return Ok(rho);
        }
    }
    Err(Error::Domain("could not draw a well-conditioned full-rank state".into()))
}

pub fn sample_mixed_ginibre(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    ginibre_with_rng(dim, rank, &mut rng_from_seed(seed))
}

/// Gaussian unitary ensemble sample `(G + G^dagger) / 2`.
pub fn gue_with_rng<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    HermitianOperator::hermitian_part(&random_matrix(dim, dim, rng))
}

/// Tangent with derivative `scale * (X - Tr[X] I / dim)`, `X` from the GUE.
pub fn tangent_with_rng<R: Rng + ?Sized>(rho: &DensityMatrix, scale: f64, rng: &mut R) -> Result<TangentState> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain(format!("tangent scale must be positive, got {scale}")));
    }
    let dim = rho.dim();
    let x = gue_with_rng(dim, rng);
    let shift = HermitianOperator::identity(dim).scale(x.trace() / dim as f64);
    let drho = (&x - &shift).scale(scale);
    TangentState::new(rho.clone(), drho)
}

pub fn sample_tangent(rho: &DensityMatrix, scale: f64, seed: u64) -> Result<TangentState> {
    tangent_with_rng(rho, scale, &mut rng_from_seed(seed))
}

/// Uniform point on the probability simplex.
pub fn random_probability<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    let mut p: Vec<f64> = e.iter().map(|x| x / s).collect();
    // push rounding into the largest entry so the sum is 1 to the last bit
    let drift = 1.0 - p.iter().sum::<f64>();
    if let Some(imax) = (0..n).max_by(|&a, &b| p[a].total_cmp(&p[b])) {
        p[imax] += drift;
    }
    p
}

/// POVM `S^{-1/2} G_k G_k^dagger S^{-1/2}` with `S = sum_k G_k G_k^dagger`.
pub fn random_povm<R: Rng + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> Result<Povm> {
    if outcomes == 0 {
        return Err(Error::InvalidPovm("a POVM needs at least one outcome".into()));
    }
    let raw: Vec<CMatrix> = (0..outcomes)
        .map(|_| {
            let g = random_matrix(dim, dim, rng);
            &g * g.adjoint()
        })
        .collect();
    let mut total = CMatrix::zeros(dim, dim);
    for r in &raw {
        total += r;
    }
    let s = eigh(&HermitianOperator::hermitian_part(&total));
    let inv_sqrt = s.map(|l| 1.0 / l.sqrt());
    let effects = raw
        .iter()
        .map(|r| HermitianOperator::hermitian_part(&(inv_sqrt.matrix() * r * inv_sqrt.matrix())))
        .collect();
    Povm::new(effects)
}
