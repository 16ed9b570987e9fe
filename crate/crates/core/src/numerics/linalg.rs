use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

/// Condition number beyond which a resolvent is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Largest real part over the eigenvalues of a real square matrix.
pub fn max_real_eigenvalue(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `(i omega I - A)^{-1}` with a 2-norm condition check.
pub fn resolvent(drift: &DMatrix<f64>, omega: f64) -> Result<DMatrix<Complex<f64>>> {
    let n = drift.nrows();
    let m = DMatrix::from_fn(n, n, |r, c| {
        let diag = if r == c { omega } else { 0.0 };
        Complex::new(-drift[(r, c)], diag)
    });
    let sv = m.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularAtFrequency { omega, condition });
    }
    m.try_inverse()
        .ok_or(Error::SingularAtFrequency { omega, condition })
}

/// Stationary covariance of a linear system: solves `A S + S A^T + D = 0`.
pub fn lyapunov(drift: &DMatrix<f64>, diffusion: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = drift.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let op = eye.kronecker(drift) + drift.kronecker(&eye);
    let rhs = -DMatrix::from_column_slice(n * n, 1, diffusion.as_slice());
    let vec = op
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NonPositiveDefinite("singular Lyapunov operator".into()))?;
    let s = DMatrix::from_column_slice(n, n, vec.as_slice());
    Ok((&s + s.transpose()) * 0.5)
}

/// Determinant of a symmetric positive-definite matrix via Cholesky.
pub fn spd_determinant(m: &DMatrix<f64>, what: &str) -> Result<f64> {
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NonPositiveDefinite(what.to_string()))?;
    Ok(chol.l().diagonal().iter().map(|d| d * d).product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn scalar_resolvent() {
        let a = dmatrix![-2.0];
        let r = resolvent(&a, 3.0).unwrap();
        let expected = Complex::new(2.0, 3.0).inv();
        assert!((r[(0, 0)] - expected).norm() < 1e-15);
    }

    #[test]
    fn singular_resolvent_is_reported() {
        let a = dmatrix![0.0, 1.0; 0.0, 0.0];
        assert!(matches!(
            resolvent(&a, 0.0),
            Err(Error::SingularAtFrequency { .. })
        ));
    }

    #[test]
    fn lyapunov_scalar() {
        let s = lyapunov(&dmatrix![-0.5], &dmatrix![3.0]).unwrap();
        assert!((s[(0, 0)] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn lyapunov_residual_vanishes() {
        let a = dmatrix![-50.0, -0.45; 100.0, -0.05];
        let d = dmatrix![0.0, 0.0; 0.0, 7.0];
        let s = lyapunov(&a, &d).unwrap();
        let res = &a * &s + &s * a.transpose() + &d;
        assert!(res.norm() < 1e-12 * d.norm());
    }

    #[test]
    fn spd_determinant_rejects_indefinite() {
        assert!(spd_determinant(&dmatrix![1.0, 2.0; 2.0, 1.0], "x").is_err());
        let d = spd_determinant(&dmatrix![2.0, 1.0; 1.0, 2.0], "x").unwrap();
        assert!((d - 3.0).abs() < 1e-14);
    }
}
