use crate::linalg::{schatten_norm, trace, trace_norm, CMatrix};
use crate::report::{BoundId, BoundReport, SATISFACTION_TOL};
use crate::{Error, Result};

fn same_shape(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::dims(a.nrows(), b.nrows()));
    }
    Ok(())
}

/// `|Tr[AB]| <= ||A||_1 ||B||_inf`, with the outer step `<= ||A||_1 ||B||_1`
/// folded into `satisfied`.
pub fn duality_check(a: &CMatrix, b: &CMatrix) -> Result<BoundReport> {
    same_shape(a, b)?;
    let lhs = trace(&(a * b)).norm();
    let a1 = trace_norm(a);
    let b_inf = schatten_norm(b, f64::INFINITY)?;
    let b1 = trace_norm(b);
    let mut r = BoundReport::new(BoundId::TraceDuality, lhs, a1 * b_inf).with("outer_rhs", a1 * b1);
    let outer = BoundReport::new(BoundId::TraceDuality, a1 * b_inf, a1 * b1);
    r.satisfied &= outer.satisfied;
    r.slack = r.slack.min(outer.slack);
    Ok(r)
}

/// `||A||_q <= ||A||_p` for `1 <= p <= q`.
pub fn monotonicity_check(a: &CMatrix, p: f64, q: f64) -> Result<BoundReport> {
    if !(p <= q) {
        return Err(Error::Domain(format!("need p <= q, got p={p}, q={q}")));
    }
    let lhs = schatten_norm(a, q)?;
    let rhs = schatten_norm(a, p)?;
    Ok(BoundReport::with_tolerance(BoundId::NormMonotonicity, lhs, rhs, SATISFACTION_TOL)
        .with("p", p)
        .with("q", q))
}

/// `||AB||_1 <= min(||A||_inf ||B||_1, ||A||_1 ||B||_inf)`.
pub fn submultiplicativity_check(a: &CMatrix, b: &CMatrix) -> Result<BoundReport> {
    same_shape(a, b)?;
    let lhs = trace_norm(&(a * b));
    let left = schatten_norm(a, f64::INFINITY)? * trace_norm(b);
    let right = trace_norm(a) * schatten_norm(b, f64::INFINITY)?;
    Ok(BoundReport::new(BoundId::TraceSubmultiplicativity, lhs, left.min(right))
        .with("inf_times_one", left)
        .with("one_times_inf", right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use crate::states::random_matrix;
    use crate::C64;

    #[test]
    fn diagonal_cases() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(3.0, 0.0), C64::new(-4.0, 0.0)]));
        let r = duality_check(&a, &a).unwrap();
        // Tr[A^2] = 25, ||A||_1 ||A||_inf = 28, ||A||_1^2 = 49
        assert!((r.lhs - 25.0).abs() < 1e-12 && (r.rhs - 28.0).abs() < 1e-12 && r.satisfied);
        let m = monotonicity_check(&a, 1.0, f64::INFINITY).unwrap();
        assert!((m.lhs - 4.0).abs() < 1e-12 && (m.rhs - 7.0).abs() < 1e-12);
        assert!(monotonicity_check(&a, 2.0, 1.0).is_err());
    }

    #[test]
    fn random_pairs_hold() {
        let mut rng = rng_from_seed(5);
        for dim in 1..6 {
            let a = random_matrix(dim, dim, &mut rng);
            let b = random_matrix(dim, dim, &mut rng);
            assert!(duality_check(&a, &b).unwrap().satisfied);
            assert!(submultiplicativity_check(&a, &b).unwrap().satisfied);
            assert!(monotonicity_check(&a, 1.5, 3.0).unwrap().satisfied);
        }
        let a = random_matrix(2, 2, &mut rng);
        assert!(duality_check(&a, &random_matrix(3, 3, &mut rng)).is_err());
    }
}
