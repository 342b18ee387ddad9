//! One-sided Jacobi SVD for dense complex matrices.

use num_complex::Complex64;

use super::{CMatrix, CVector};

const MAX_SWEEPS: usize = 80;

/// `M = U diag(s) V^dagger` with `s` descending and `r = min(m, n)` columns in
/// `U` and `V`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    /// `U V^dagger`, the closest partial isometry to `M`; `Re Tr[W^dagger M]`
    /// equals the trace norm for `W` equal to it.
    pub fn polar_factor(&self) -> CMatrix {
        &self.u * self.v.adjoint()
    }
}

/// Thin SVD by Hestenes rotations on the columns of the taller orientation.
pub fn svd(m: &CMatrix) -> Svd {
    if m.nrows() < m.ncols() {
        let t = svd(&m.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let (rows, n) = m.shape();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(f64, usize)> = (0..n).map(|j| (a.column(j).norm(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let s: Vec<f64> = order.iter().map(|o| o.0).collect();
    let smax = s.first().copied().unwrap_or(0.0);
    let mut u_cols: Vec<CVector> = Vec::with_capacity(n);
    for &(sj, j) in &order {
        let col: CVector = a.column(j).into_owned();
        let candidate = if sj > 1e-8 * smax && sj > 0.0 { col.unscale(sj) } else { col };
        u_cols.push(orthonormal_completion(candidate, &u_cols, rows));
    }
    let v_cols: Vec<CVector> = order.iter().map(|o| v.column(o.1).into_owned()).collect();
    Svd { u: CMatrix::from_columns(&u_cols), s, v: CMatrix::from_columns(&v_cols) }
}

/// Columns `p`, `q` := `c x_p - s e^{-i phi} x_q`, `s x_p + c e^{-i phi} x_q`.
fn rotate(x: &mut CMatrix, p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let back = phase.conj();
    for i in 0..x.nrows() {
        let xp = x[(i, p)];
        let xq = x[(i, q)] * back;
        x[(i, p)] = xp * c - xq * s;
        x[(i, q)] = xp * s + xq * c;
    }
}

/// Projects `v` off `basis` (twice) and normalises; falls back to the first
/// standard basis vector that survives when `v` is numerically dependent.
fn orthonormal_completion(v: CVector, basis: &[CVector], rows: usize) -> CVector {
    let project = |mut w: CVector| {
        for _ in 0..2 {
            for b in basis {
                let coef = b.dotc(&w);
                w -= b * coef;
            }
        }
        w
    };
    let w = project(v);
    let norm = w.norm();
    if norm > 0.5 {
        return w.unscale(norm);
    }
    for k in 0..rows {
        let mut e = CVector::zeros(rows);
        e[k] = Complex64::new(1.0, 0.0);
        let w = project(e);
        let norm = w.norm();
        if norm > 0.5 {
            return w.unscale(norm);
        }
    }
    unreachable!("fewer than `rows` basis vectors always leave a direction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use crate::states::random_matrix;

    fn check(m: &CMatrix) {
        let d = svd(m);
        let r = m.nrows().min(m.ncols());
        let sigma = CMatrix::from_diagonal(&CVector::from_iterator(r, d.s.iter().map(|&x| Complex64::new(x, 0.0))));
        let rec = &d.u * sigma * d.v.adjoint();
        assert!((rec - m).norm() <= 1e-13 * m.norm().max(1.0));
        assert!((d.u.adjoint() * &d.u - CMatrix::identity(r, r)).norm() < 1e-13);
        assert!((d.v.adjoint() * &d.v - CMatrix::identity(r, r)).norm() < 1e-13);
        assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
        let w = d.polar_factor();
        assert!(((w.adjoint() * m).trace().re - d.s.iter().sum::<f64>()).abs() <= 1e-13 * m.norm().max(1.0));
    }

    #[test]
    fn random_and_rank_deficient() {
        let mut rng = rng_from_seed(4);
        for (r, c, k) in [(4, 3, 2), (3, 5, 1), (6, 6, 3), (8, 16, 8), (5, 5, 5), (1, 4, 1)] {
            for _ in 0..20 {
                let a = random_matrix(r, k, &mut rng);
                let b = random_matrix(k, c, &mut rng);
                check(&(a * b));
            }
        }
        check(&CMatrix::zeros(3, 2));
    }

    #[test]
    fn diagonal_values() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, -4.0)]));
        assert_eq!(svd(&m).s, vec![4.0, 3.0]);
    }
}
