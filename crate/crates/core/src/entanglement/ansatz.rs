use crate::linalg::{CMatrix, CVector, HermitianOperator};
use crate::states::DensityMatrix;
use crate::{Error, Result, C64};

/// Tolerance on weight sums and factor norms.
pub const WEIGHT_TOL: f64 = 1e-12;

/// `phi_1 (x) ... (x) phi_n`, big-endian.
pub fn product_vector(factors: &[CVector]) -> CVector {
    let mut v = CVector::from_element(1, C64::new(1.0, 0.0));
    for f in factors {
        v = v.kronecker(f);
    }
    v
}

/// `sum_a q_a |phi_a^1 ... phi_a^n><phi_a^1 ... phi_a^n|`.
#[derive(Debug, Clone)]
pub struct SeparableAnsatz {
    weights: Vec<f64>,
    factors: Vec<Vec<CVector>>,
    local_dim: usize,
}

impl SeparableAnsatz {
    pub fn new(weights: Vec<f64>, factors: Vec<Vec<CVector>>) -> Result<Self> {
        if weights.is_empty() || weights.len() != factors.len() {
            return Err(Error::dims(weights.len(), factors.len()));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidState("ansatz weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if !((total - 1.0).abs() <= WEIGHT_TOL) {
            return Err(Error::InvalidState(format!("ansatz weights sum to {total}")));
        }
        let n = factors[0].len();
        if n == 0 {
            return Err(Error::InvalidState("ansatz needs at least one site".into()));
        }
        let local_dim = factors[0][0].len();
        for comp in &factors {
            if comp.len() != n {
                return Err(Error::dims(n, comp.len()));
            }
            for f in comp {
                if f.len() != local_dim || local_dim == 0 {
                    return Err(Error::dims(local_dim, f.len()));
                }
                if !((f.norm() - 1.0).abs() <= WEIGHT_TOL) {
                    return Err(Error::InvalidState(format!("factor has norm {}", f.norm())));
                }
            }
        }
        Ok(Self { weights, factors, local_dim })
    }

    /// A single product pure state.
    pub fn product(factors: Vec<CVector>) -> Result<Self> {
        Self::new(vec![1.0], vec![factors])
    }

    /// `(1 - gamma) sigma + gamma I / dim`, with `I / dim` written as the
    /// uniform mixture of computational-basis product states.
    pub fn mix_with_identity(&self, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("mixing weight {gamma} outside [0, 1]")));
        }
        let (n, d) = (self.n_sites(), self.local_dim);
        let dim = self.dim();
        let mut weights: Vec<f64> = self.weights.iter().map(|w| w * (1.0 - gamma)).collect();
        let mut factors = self.factors.clone();
        for b in 0..dim {
            let comp = (0..n)
                .map(|j| {
                    let digit = (b / d.pow((n - 1 - j) as u32)) % d;
                    let mut e = CVector::zeros(d);
                    e[digit] = C64::new(1.0, 0.0);
                    e
                })
                .collect();
            factors.push(comp);
            weights.push(gamma / dim as f64);
        }
        Self::new(weights, factors)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn factors(&self) -> &[Vec<CVector>] {
        &self.factors
    }

    pub fn n_components(&self) -> usize {
        self.weights.len()
    }

    pub fn n_sites(&self) -> usize {
        self.factors[0].len()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.n_sites() as u32)
    }

    pub fn product_vector(&self, a: usize) -> CVector {
        product_vector(&self.factors[a])
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        let dim = self.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for (a, w) in self.weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let v = self.product_vector(a);
            acc += (&v * v.adjoint()).scale(*w);
        }
        let trace = acc.trace().re;
        DensityMatrix::new(HermitianOperator::hermitian_part(&acc.unscale(trace)))
    }
}
