use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CMatrix;
use crate::{Error, Result};

/// Absolute tolerance on `max |A_ij - conj(A_ji)|` accepted by
/// [`HermitianOperator::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A finite-dimensional Hermitian matrix.
///
/// Construction through [`HermitianOperator::new`] rejects inputs whose
/// deviation from Hermiticity exceeds [`HERMITIAN_TOL`]; the input is never
/// symmetrized behind the caller's back. Results of internal arithmetic go
/// through [`HermitianOperator::hermitian_part`], which is an explicit
/// projection.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    m: CMatrix,
}

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::dims(m.nrows(), m.ncols()));
        }
        if m.nrows() == 0 {
            return Err(Error::Domain("operator dimension must be at least 1".into()));
        }
        let deviation = hermiticity_deviation(&m);
        if !(deviation <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { m })
    }

    /// `(A + A^dagger) / 2`.
    pub fn hermitian_part(m: &CMatrix) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "hermitian_part needs a square matrix");
        let m = (m + m.adjoint()).scale(0.5);
        Self { m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: CMatrix::identity(dim, dim) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Self { m }
    }

    /// Builds an operator from rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::dims(n, row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(v, 0.0);
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.scale(s) }
    }

    /// Largest entry magnitude.
    pub fn max_abs_entry(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self (x) other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self { m: kron(&self.m, &other.m) }
    }

    /// `-i [self, rho]`, the generator of `e^{-ixH} rho e^{ixH}` at this `rho`.
    pub fn unitary_derivative(&self, rho: &Self) -> Self {
        let c = commutator(&self.m, &rho.m) * Complex64::new(0.0, -1.0);
        Self::hermitian_part(&c)
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::dims(self.dim(), other.dim()));
        }
        Ok(())
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator { m: &self.m - &rhs.m }
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scale(rhs)
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        self.scale(-1.0)
    }
}

/// Wire form of an operator: `{dim, entries: [[re, im], ...]}` in row-major order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct OperatorJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl OperatorJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self { dim, entries }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::dims(self.dim * self.dim, self.entries.len()));
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.entries[i * self.dim + j];
            Complex64::new(re, im)
        }))
    }
}

impl HermitianOperator {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&OperatorJson::from_matrix(&self.m)).expect("operator serializes")
    }

    /// Parses the JSON schema and validates Hermiticity.
    pub fn from_json(s: &str) -> Result<Self> {
        let wire: OperatorJson = serde_json::from_str(s)?;
        Self::new(wire.to_matrix()?)
    }
}

fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(d);
        }
    }
    worst
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Kronecker product with `a` as the most significant factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn accepts_deviation_below_tolerance() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 1e-13), c(0.5, 0.0), c(0.0, 0.0)]);
        assert!(HermitianOperator::new(m).is_ok());
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 1e-11), c(0.5, 0.0), c(0.0, 0.0)]);
        assert!(HermitianOperator::new(m).is_err());
    }

    #[test]
    fn rejects_empty_and_nonsquare() {
        assert!(HermitianOperator::new(CMatrix::zeros(0, 0)).is_err());
        assert!(HermitianOperator::new(CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn rejects_nan() {
        let m = CMatrix::from_element(1, 1, c(f64::NAN, 0.0));
        assert!(HermitianOperator::new(m).is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let h = HermitianOperator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.25, -0.5), c(0.25, 0.5), c(-2.0, 0.0)],
        ))
        .unwrap();
        let s = h.to_json();
        assert_eq!(s, r#"{"dim":2,"entries":[[1.0,0.0],[0.25,-0.5],[0.25,0.5],[-2.0,0.0]]}"#);
        assert_eq!(HermitianOperator::from_json(&s).unwrap(), h);
        let bad = r#"{"dim":2,"entries":[[1.0,0.0],[0.25,-0.5],[0.25,-0.5],[-2.0,0.0]]}"#;
        assert!(HermitianOperator::from_json(bad).is_err());
        let short = r#"{"dim":2,"entries":[[1.0,0.0]]}"#;
        assert!(HermitianOperator::from_json(short).is_err());
        let extra = r#"{"dim":1,"entries":[[1.0,0.0]],"x":1}"#;
        assert!(HermitianOperator::from_json(extra).is_err());
    }

    #[test]
    fn kron_is_big_endian() {
        let z = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
        let i = HermitianOperator::identity(2);
        let zi = z.kron(&i);
        let diag: Vec<f64> = (0..4).map(|k| zi.matrix()[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }
}
