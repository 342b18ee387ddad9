use super::DensityMatrix;
use crate::linalg::trace_norm;
use crate::report::{BoundId, BoundReport, SATISFACTION_TOL};
use crate::{Error, Result};

fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dims(rho.dim(), sigma.dim()));
    }
    Ok(())
}

/// Root fidelity `Tr sqrt(sqrt(rho) sigma sqrt(rho))`, evaluated as the trace
/// norm of `sqrt(rho) sqrt(sigma)` so that it is symmetric by construction.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let prod = rho.sqrt().matrix() * sigma.sqrt().matrix();
    Ok(trace_norm(&prod).clamp(0.0, 1.0))
}

/// `||rho - sigma||_1`, in `[0, 2]`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    Ok((rho.op() - sigma.op()).trace_norm())
}

/// `1 - F <= ||rho - sigma||_1 / 2 <= sqrt(1 - F^2)`.
pub fn fvg_check(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundReport> {
    let f = fidelity(rho, sigma)?;
    let half = 0.5 * trace_distance(rho, sigma)?;
    let upper = (1.0 - f * f).max(0.0).sqrt();
    Ok(BoundReport::two_sided(BoundId::FuchsVanDeGraaf, 1.0 - f, half, upper, SATISFACTION_TOL)
        .with("fidelity", f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVector;
    use crate::C64;

    fn ket(v: &[f64]) -> DensityMatrix {
        DensityMatrix::pure(&CVector::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0)))).unwrap()
    }

    #[test]
    fn fidelity_examples() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&ket(&[1.0, 0.0]), &ket(&[0.0, 1.0])).unwrap() < 1e-12);
        let sigma = DensityMatrix::maximally_mixed(2);
        let expected = 0.30f64.sqrt() + 0.20f64.sqrt();
        assert!((fidelity(&rho, &sigma).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.99494).abs() < 1e-5);
        assert!(fidelity(&rho, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        assert_eq!(trace_distance(&rho, &rho).unwrap(), 0.0);
        assert!((trace_distance(&ket(&[1.0, 0.0]), &ket(&[0.0, 1.0])).unwrap() - 2.0).abs() < 1e-12);
        let d = trace_distance(&rho, &DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((d - 0.2).abs() < 1e-12);
    }

    #[test]
    fn fvg_examples() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let r = fvg_check(&rho, &rho).unwrap();
        assert!(r.satisfied && r.lhs.abs() < 1e-12 && r.rhs.abs() < 1e-6);
        let r = fvg_check(&ket(&[1.0, 0.0]), &ket(&[0.0, 1.0])).unwrap();
        assert!(r.satisfied);
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12);
        assert!((r.ctx("lower").unwrap() - 1.0).abs() < 1e-12);
    }
}
