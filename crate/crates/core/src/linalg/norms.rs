use num_complex::Complex64;

use super::spectral::{eigh, exp_from_spectrum};
use super::{gauss_legendre, CMatrix, HermitianOperator};
use crate::{Error, Result};

/// Singular values of a general complex matrix, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    super::svd(m).s
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("Schatten exponent must satisfy p >= 1, got {p}")));
    }
    Ok(())
}

fn p_norm_of(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    let values: Vec<f64> = values.map(f64::abs).collect();
    let max = values.iter().copied().fold(0.0, f64::max);
    if p.is_infinite() {
        return max;
    }
    if max == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return values.iter().sum();
    }
    let s: f64 = values.iter().map(|v| (v / max).powf(p)).sum();
    max * s.powf(1.0 / p)
}

/// Schatten p-norm `(sum_i s_i^p)^{1/p}` of a general matrix, with
/// `p = f64::INFINITY` giving the largest singular value.
pub fn schatten_norm(m: &CMatrix, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(p_norm_of(singular_values(m).into_iter(), p))
}

/// Trace norm of a general matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    singular_values(m).iter().sum()
}

impl HermitianOperator {
    /// Schatten p-norm from the eigenvalues (`|lambda_i|` are the singular values).
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok(p_norm_of(eigh(self).eigenvalues.into_iter(), p))
    }

    pub fn trace_norm(&self) -> f64 {
        eigh(self).eigenvalues.iter().map(|l| l.abs()).sum()
    }

    pub fn operator_norm(&self) -> f64 {
        let s = eigh(self);
        s.lambda_min().abs().max(s.lambda_max().abs())
    }
}

/// Trace-norm residual of `e^A - e^B - int_0^1 e^{tA} (A - B) e^{(1-t)B} dt`
/// with the integral replaced by an `nodes`-point Gauss-Legendre rule.
pub fn exp_identity_residual(a: &HermitianOperator, b: &HermitianOperator, nodes: usize) -> Result<f64> {
    a.check_same_dim(b)?;
    if nodes == 0 {
        return Err(Error::Domain("quadrature needs at least one node".into()));
    }
    let sa = eigh(a);
    let sb = eigh(b);
    let one = Complex64::new(1.0, 0.0);
    let diff = a.matrix() - b.matrix();
    let mut integral = CMatrix::zeros(a.dim(), a.dim());
    for (t, w) in gauss_legendre(nodes).on_interval(0.0, 1.0) {
        let ea = exp_from_spectrum(&sa, one * t);
        let eb = exp_from_spectrum(&sb, one * (1.0 - t));
        integral += (ea * &diff * eb) * Complex64::new(w, 0.0);
    }
    let lhs = exp_from_spectrum(&sa, one) - exp_from_spectrum(&sb, one);
    Ok(trace_norm(&(lhs - integral)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_examples() {
        let a = HermitianOperator::from_real_diagonal(&[3.0, -4.0]);
        assert!((a.schatten_norm(1.0).unwrap() - 7.0).abs() < 1e-14);
        assert!((a.schatten_norm(f64::INFINITY).unwrap() - 4.0).abs() < 1e-14);
        assert!((a.schatten_norm(2.0).unwrap() - 5.0).abs() < 1e-14);
        let m = a.matrix();
        assert!((schatten_norm(m, 1.0).unwrap() - 7.0).abs() < 1e-14);
        assert!((schatten_norm(m, f64::INFINITY).unwrap() - 4.0).abs() < 1e-14);
        assert!((schatten_norm(m, 2.0).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_p_below_one() {
        let a = HermitianOperator::identity(2);
        assert!(matches!(a.schatten_norm(0.5), Err(Error::Domain(_))));
        assert!(schatten_norm(a.matrix(), f64::NAN).is_err());
    }

    #[test]
    fn zero_matrix_norms() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(schatten_norm(&z, 2.5).unwrap(), 0.0);
    }

    #[test]
    fn identity_residual_for_equal_operators() {
        let a = HermitianOperator::from_real_rows(&[&[0.3, -1.2], &[-1.2, 2.0]]).unwrap();
        assert!(exp_identity_residual(&a, &a, 64).unwrap() <= 1e-12);
        assert!(exp_identity_residual(&a, &HermitianOperator::identity(3), 8).is_err());
        assert!(exp_identity_residual(&a, &a, 0).is_err());
    }

    #[test]
    fn identity_residual_commuting_closed_form() {
        let a = HermitianOperator::from_real_diagonal(&[0.7, -1.3, 2.1, 0.0]);
        let b = HermitianOperator::from_real_diagonal(&[-0.4, 1.9, 0.3, -2.2]);
        assert!(exp_identity_residual(&a, &b, 32).unwrap() <= 1e-10);
    }
}
