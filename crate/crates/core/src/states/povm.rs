use crate::linalg::{eigh, CMatrix, HermitianOperator};
use crate::{Error, Result};

/// A finite positive-operator-valued measure.
#[derive(Debug, Clone)]
pub struct Povm {
    effects: Vec<HermitianOperator>,
}

impl Povm {
    /// Validates positivity (within 1e-12) and completeness (within 1e-10).
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidPovm("a POVM needs at least one outcome".into()))?;
        let dim = first.dim();
        let mut total = CMatrix::zeros(dim, dim);
        for (i, e) in effects.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::dims(dim, e.dim()));
            }
            let lmin = eigh(e).lambda_min();
            if !(lmin >= -1e-12) {
                return Err(Error::InvalidPovm(format!("effect {i} has eigenvalue {lmin:e}")));
            }
            total += e.matrix();
        }
        let dev = (total - CMatrix::identity(dim, dim)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(dev <= 1e-10) {
            return Err(Error::InvalidPovm(format!("effects sum to identity only within {dev:e}")));
        }
        Ok(Self { effects })
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self { effects: vec![HermitianOperator::identity(dim)] }
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn from_basis(u: &CMatrix) -> Result<Self> {
        let effects = (0..u.ncols())
            .map(|j| {
                let v = u.column(j);
                HermitianOperator::hermitian_part(&(v * v.adjoint()))
            })
            .collect();
        Self::new(effects)
    }

    pub fn computational(dim: usize) -> Self {
        Self::from_basis(&CMatrix::identity(dim, dim)).expect("computational basis is complete")
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }
}
