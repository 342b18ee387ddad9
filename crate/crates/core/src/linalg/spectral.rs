use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{CMatrix, HermitianOperator};

/// `A = U diag(eigenvalues) U^dagger` with eigenvalues ascending, so
/// `eigenvalues[0]` is `lambda_min`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `U f(Lambda) U^dagger`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> HermitianOperator {
        let diag: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.from_eigen_diagonal(&diag)
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.map(|l| l)
    }

    /// `U diag(d) U^dagger` for an arbitrary real diagonal.
    pub fn from_eigen_diagonal(&self, d: &[f64]) -> HermitianOperator {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &dj) in d.iter().enumerate() {
            scaled.column_mut(j).scale_mut(dj);
        }
        HermitianOperator::hermitian_part(&(scaled * u.adjoint()))
    }

    /// `U^dagger m U`.
    pub fn to_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        self.eigenvectors.adjoint() * m * &self.eigenvectors
    }

    /// `U m U^dagger`.
    pub fn from_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        &self.eigenvectors * m * self.eigenvectors.adjoint()
    }
}

/// Dense Hermitian eigensolver: ascending eigenvalues, orthonormal columns.
pub fn eigh(a: &HermitianOperator) -> SpectralDecomposition {
    let n = a.dim();
    let eig = SymmetricEigen::new(a.matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    SpectralDecomposition { eigenvalues, eigenvectors }
}

pub fn lambda_min(a: &HermitianOperator) -> f64 {
    eigh(a).lambda_min()
}

/// `e^{tA}` through the spectral decomposition of `A`.
pub fn herm_exp(a: &HermitianOperator, t: f64) -> HermitianOperator {
    eigh(a).map(|l| (t * l).exp())
}

/// `e^{tA}` as a raw matrix from a precomputed decomposition; `t` may be complex.
pub(crate) fn exp_from_spectrum(s: &SpectralDecomposition, t: Complex64) -> CMatrix {
    let u = &s.eigenvectors;
    let mut scaled = u.clone();
    for (j, &l) in s.eigenvalues.iter().enumerate() {
        let f = (t * l).exp();
        for i in 0..s.dim() {
            scaled[(i, j)] *= f;
        }
    }
    scaled * u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_norm;

    #[test]
    fn lambda_min_examples() {
        let d = 5;
        let a = HermitianOperator::identity(d).scale(1.0 / d as f64);
        assert!((lambda_min(&a) - 0.2).abs() < 1e-15);
        let a = HermitianOperator::from_real_diagonal(&[0.75, 0.25]);
        assert!((lambda_min(&a) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_ascending_and_reconstruct() {
        let a = HermitianOperator::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, -1.0, 0.5], &[0.0, 0.5, 3.0]])
            .unwrap();
        let s = eigh(&a);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let err = trace_norm(&(s.reconstruct().matrix() - a.matrix()));
        assert!(err <= 1e-10 * 3.0);
    }

    #[test]
    fn exp_examples() {
        let a = HermitianOperator::from_real_rows(&[&[0.3, -1.2], &[-1.2, 2.0]]).unwrap();
        let e0 = herm_exp(&a, 0.0);
        assert!(trace_norm(&(e0.matrix() - CMatrix::identity(2, 2))) < 1e-14);
        let d = HermitianOperator::from_real_diagonal(&[0.5, -2.0]);
        let e = herm_exp(&d, 1.0);
        assert!((e.matrix()[(0, 0)].re - 0.5f64.exp()).abs() < 1e-14);
        assert!((e.matrix()[(1, 1)].re - (-2.0f64).exp()).abs() < 1e-14);
        assert!(e.matrix()[(0, 1)].norm() < 1e-15);
        assert!(lambda_min(&herm_exp(&a, 1.0)) > 0.0);
    }

    #[test]
    fn complex_exp_is_unitary() {
        let h = HermitianOperator::from_real_rows(&[&[0.3, -1.2], &[-1.2, 2.0]]).unwrap();
        let u = exp_from_spectrum(&eigh(&h), Complex64::new(0.0, -0.7));
        let id = &u * u.adjoint();
        assert!(trace_norm(&(id - CMatrix::identity(2, 2))) < 1e-13);
    }
}
