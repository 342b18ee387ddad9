use crate::linalg::{eigh, CMatrix, CVector, HermitianOperator, SpectralDecomposition};
use crate::linalg::operator::OperatorJson;
use crate::{Error, Result};

/// Tolerance on `|Tr rho - 1|` and on `|Tr d rho|` (the latter scaled by the
/// largest entry of `d rho` when that exceeds one).
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-EIGEN_TOL, 0)` are reported as zero; anything lower is
/// rejected.
pub const EIGEN_TOL: f64 = 1e-12;

/// A validated density matrix with its spectral decomposition cached.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: HermitianOperator,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if !((tr - 1.0).abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let spectrum = eigh(&op);
        let lmin = spectrum.lambda_min();
        if !(lmin >= -EIGEN_TOL) {
            return Err(Error::InvalidState(format!("negative eigenvalue {lmin:e}")));
        }
        Ok(Self { op, spectrum })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("state vector has zero or non-finite norm".into()));
        }
        let v = psi.unscale(norm);
        let m = &v * v.adjoint();
        let mut op = HermitianOperator::hermitian_part(&m);
        renormalize(&mut op);
        Self::new(op)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(HermitianOperator::identity(dim).scale(1.0 / dim as f64)).expect("I/d is a state")
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(HermitianOperator::from_real_diagonal(probs))
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Ascending eigenvalues with the tolerance band clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.eigenvalues.iter().map(|&l| l.max(0.0)).collect()
    }

    pub fn lambda_min(&self) -> f64 {
        self.spectrum.lambda_min().max(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.spectrum.lambda_max()
    }

    pub fn purity(&self) -> f64 {
        self.spectrum.eigenvalues.iter().map(|l| l * l).sum()
    }

    /// `sqrt(rho)` with clamped eigenvalues.
    pub fn sqrt(&self) -> HermitianOperator {
        self.spectrum.map(|l| l.max(0.0).sqrt())
    }

    /// `(1 - gamma) rho + gamma I / dim`.
    pub fn mix_with_identity(&self, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("mixing weight {gamma} outside [0, 1]")));
        }
        let d = self.dim() as f64;
        let op = &self.op.scale(1.0 - gamma) + &HermitianOperator::identity(self.dim()).scale(gamma / d);
        Self::new(op)
    }

    /// `(1 - dim * floor) rho + floor * I`, which has `lambda_min >= floor`.
    pub fn with_eigenvalue_floor(&self, floor: f64) -> Result<Self> {
        let d = self.dim() as f64;
        if !(floor >= 0.0 && floor * d <= 1.0 + 1e-15) {
            return Err(Error::Domain(format!("eigenvalue floor {floor} outside [0, 1/{d}]")));
        }
        self.mix_with_identity((floor * d).min(1.0))
    }

    /// `sum_a w_a rho_a`.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        check_probability(weights)?;
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::dims(weights.len(), states.len()));
        }
        let dim = states[0].dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != dim {
                return Err(Error::dims(dim, s.dim()));
            }
            acc += s.matrix().scale(*w);
        }
        let mut op = HermitianOperator::hermitian_part(&acc);
        renormalize(&mut op);
        Self::new(op)
    }

    /// `U rho U^dagger` for unitary `U`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        let mut op = conjugate_op(&self.op, u)?;
        renormalize(&mut op);
        Self::new(op)
    }

    pub fn to_json(&self) -> String {
        self.op.to_json()
    }

    /// Parses the operator schema and validates the state invariants.
    pub fn from_json(s: &str) -> Result<Self> {
        let wire: OperatorJson = serde_json::from_str(s)?;
        Self::from_matrix(wire.to_matrix()?)
    }
}

/// `U A U^dagger`.
pub(crate) fn conjugate_op(a: &HermitianOperator, u: &CMatrix) -> Result<HermitianOperator> {
    if u.nrows() != a.dim() || u.ncols() != a.dim() {
        return Err(Error::dims(a.dim(), u.nrows()));
    }
    Ok(HermitianOperator::hermitian_part(&(u * a.matrix() * u.adjoint())))
}

/// Removes trace drift accumulated by floating-point arithmetic.
fn renormalize(op: &mut HermitianOperator) {
    let tr = op.trace();
    if tr > 0.0 && (tr - 1.0).abs() < 1e-9 {
        *op = op.scale(1.0 / tr);
    }
}

pub(crate) fn check_probability(p: &[f64]) -> Result<()> {
    if p.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::Domain("probabilities must be nonnegative".into()));
    }
    let s: f64 = p.iter().sum();
    if !((s - 1.0).abs() <= 1e-12) {
        return Err(Error::Domain(format!("probabilities sum to {s}, not 1")));
    }
    Ok(())
}

/// A density matrix together with its derivative with respect to the
/// estimated parameter at one point.
///
/// No positivity constraint is placed on `rho + t d rho` for finite `t`; the
/// SLD, QFI and every bound only need the pair at the point.
#[derive(Debug, Clone)]
pub struct TangentState {
    rho: DensityMatrix,
    drho: HermitianOperator,
}

impl TangentState {
    pub fn new(rho: DensityMatrix, drho: HermitianOperator) -> Result<Self> {
        rho.op().check_same_dim(&drho)?;
        let tr = drho.trace();
        let tol = TRACE_TOL * drho.max_abs_entry().max(1.0);
        if !(tr.abs() <= tol) {
            return Err(Error::InvalidTangent(format!("derivative has trace {tr:e}")));
        }
        Ok(Self { rho, drho })
    }

    /// Tangent with zero derivative.
    pub fn stationary(rho: DensityMatrix) -> Self {
        let drho = HermitianOperator::zeros(rho.dim());
        Self { rho, drho }
    }

    /// Tangent of `e^{-ixH} rho e^{ixH}` at `x = 0`: `d rho = -i [H, rho]`.
    pub fn unitary(rho: DensityMatrix, h: &HermitianOperator) -> Result<Self> {
        rho.op().check_same_dim(h)?;
        let drho = h.unitary_derivative(rho.op());
        Self::new(rho, drho)
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn drho(&self) -> &HermitianOperator {
        &self.drho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// `(rho1 (x) rho2, d rho1 (x) rho2 + rho1 (x) d rho2)`.
    pub fn product(&self, other: &TangentState) -> Result<TangentState> {
        let rho = DensityMatrix::new(self.rho.op().kron(other.rho.op()))?;
        let drho = &self.drho.kron(other.rho.op()) + &self.rho.op().kron(&other.drho);
        TangentState::new(rho, drho)
    }

    /// Simultaneous conjugation `(U rho U^dagger, U d rho U^dagger)`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<TangentState> {
        TangentState::new(self.rho.conjugate(u)?, conjugate_op(&self.drho, u)?)
    }

    /// Same state, derivative multiplied by `c`.
    pub fn scale_derivative(&self, c: f64) -> TangentState {
        TangentState { rho: self.rho.clone(), drho: self.drho.scale(c) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn validates_trace_and_positivity() {
        assert!(DensityMatrix::diagonal(&[0.75, 0.25]).is_ok());
        assert!(matches!(DensityMatrix::diagonal(&[0.75, 0.3]), Err(Error::InvalidState(_))));
        assert!(matches!(DensityMatrix::diagonal(&[1.5, -0.5]), Err(Error::InvalidState(_))));
    }

    #[test]
    fn clamps_tiny_negative_eigenvalues() {
        let rho = DensityMatrix::diagonal(&[1.0 + 5e-13, -5e-13]).unwrap();
        assert_eq!(rho.lambda_min(), 0.0);
        assert!(rho.eigenvalues().iter().all(|&l| l >= 0.0));
        assert!(DensityMatrix::diagonal(&[1.0 + 5e-12, -5e-12]).is_err());
    }

    #[test]
    fn eigenvalue_floor_and_mixing() {
        let rho = DensityMatrix::diagonal(&[1.0, 0.0, 0.0]).unwrap();
        let f = rho.with_eigenvalue_floor(0.1).unwrap();
        assert!((f.lambda_min() - 0.1).abs() < 1e-14);
        assert!(rho.with_eigenvalue_floor(0.5).is_err());
        let m = rho.mix_with_identity(1.0).unwrap();
        assert!((m.lambda_min() - 1.0 / 3.0).abs() < 1e-14);
        assert!(rho.mix_with_identity(1.5).is_err());
    }

    #[test]
    fn tangent_must_be_traceless() {
        let rho = DensityMatrix::maximally_mixed(2);
        let bad = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
        assert!(matches!(TangentState::new(rho.clone(), bad), Err(Error::InvalidTangent(_))));
        let good = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
        assert!(TangentState::new(rho.clone(), good).is_ok());
        let wrong_dim = HermitianOperator::zeros(3);
        assert!(TangentState::new(rho, wrong_dim).is_err());
    }

    #[test]
    fn json_loader_validates_state() {
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let s = rho.to_json();
        let back = DensityMatrix::from_json(&s).unwrap();
        assert_eq!(back.op(), rho.op());
        let not_state = HermitianOperator::from_real_diagonal(&[0.5, 0.6]).to_json();
        assert!(DensityMatrix::from_json(&not_state).is_err());
    }

    #[test]
    fn pure_state_from_unnormalized_vector() {
        let psi = CVector::from_vec(vec![c64(3.0), c64(4.0)]);
        let rho = DensityMatrix::pure(&psi).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 0.36).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!(DensityMatrix::pure(&CVector::zeros(2)).is_err());
    }
}
