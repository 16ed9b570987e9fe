//! Output quadrature variances, the 6x6 covariance matrix and spectral purity.
//!
//! Quadratures are normalized so that vacuum noise is 1. The sum and difference
//! quadratures are `X_± = X_i ± X_s` with variances reported as `2<dX_±^2>`;
//! the orthonormal modes `(X_i ± X_s)/√2` carry the same numbers in the
//! individual-mode matrix, so `det M = N_- D_X D_Y` holds exactly.

use nalgebra::{DMatrix, Matrix3, Matrix6};

use crate::error::{Error, Result};
use crate::model::{InjectionMode, SteadyState, TropoParams};
use crate::numerics::linalg;
use crate::spectra::{self, SpectralSet};

/// Output quadrature (co)variances in the pump / sum / difference basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureVariances {
    pub omega: f64,
    /// `4<dX_p^2>`.
    pub x_pp: f64,
    /// `2<dX_+^2>`.
    pub x_plus_plus: f64,
    /// `2<dX_-^2>`.
    pub x_minus_minus: f64,
    /// `2<dX_p dX_+>`.
    pub x_p_plus: f64,
    pub y_pp: f64,
    pub y_plus_plus: f64,
    pub y_minus_minus: f64,
    pub y_p_plus: f64,
}

impl QuadratureVariances {
    pub fn vacuum(omega: f64) -> Self {
        QuadratureVariances {
            omega,
            x_pp: 1.0,
            x_plus_plus: 1.0,
            x_minus_minus: 1.0,
            x_p_plus: 0.0,
            y_pp: 1.0,
            y_plus_plus: 1.0,
            y_minus_minus: 1.0,
            y_p_plus: 0.0,
        }
    }

    /// Uncertainty product of the difference mode.
    pub fn n_minus(&self) -> f64 {
        self.x_minus_minus * self.y_minus_minus
    }

    pub fn n_plus(&self) -> f64 {
        self.x_plus_plus * self.y_plus_plus
    }

    pub fn n_pump(&self) -> f64 {
        self.x_pp * self.y_pp
    }

    /// Determinant of the amplitude (pump, sum) block.
    pub fn d_x(&self) -> f64 {
        self.x_pp * self.x_plus_plus - self.x_p_plus * self.x_p_plus
    }

    pub fn d_y(&self) -> f64 {
        self.y_pp * self.y_plus_plus - self.y_p_plus * self.y_p_plus
    }

    /// Single-beam amplitude variance `4<dX_i^2> = 4<dX_s^2>`.
    pub fn x_single(&self) -> f64 {
        0.5 * (self.x_plus_plus + self.x_minus_minus)
    }
}

/// Maps intracavity spectra to output variances.
///
/// Symmetric injection uses `4X_m = 1 + kappa_m/N_m (eps_m^2)` and
/// `4Y_m = 1 + 4 kappa_m N_m (phi_m^2)` in the (p, ±) basis. The difference
/// mode is evaluated in its cancellation-free rational form, which is exact
/// for the symmetric closed forms and keeps `N_- = 1` to rounding even when
/// the amplitude variance is deeply squeezed. Asymmetric injection mixes the
/// sum and difference spectra with weights `(1 ± √(1-mu))^2`.
pub fn output_variances(
    params: &TropoParams,
    steady: &SteadyState,
    spectral: &SpectralSet,
) -> QuadratureVariances {
    let s = spectral;
    let (kp, np, n) = (params.kappa_p, steady.n_pump, steady.n_signal);
    match params.injection {
        InjectionMode::Symmetric => {
            let k = params.kappa;
            let (x_minus_minus, y_minus_minus) = difference_mode_symmetric(params, s.omega);
            QuadratureVariances {
                omega: s.omega,
                x_pp: 1.0 + kp / np * s.eps_p_sq,
                x_plus_plus: 1.0 + k / (2.0 * n) * s.eps_plus_sq,
                x_minus_minus,
                x_p_plus: (kp / (2.0 * np)).sqrt() * (k / (2.0 * n)).sqrt() * s.eps_p_plus,
                y_pp: 1.0 + 4.0 * kp * np * s.phi_p_sq,
                y_plus_plus: 1.0 + 2.0 * k * n * s.phi_plus_sq,
                y_minus_minus,
                y_p_plus: (2.0 * kp * np).sqrt() * (2.0 * k * n).sqrt() * s.phi_p_plus,
            }
        }
        InjectionMode::Asymmetric => {
            let ki = params.kappa_idler();
            let r = (1.0 - params.mu).sqrt();
            let (wa, wb) = ((1.0 + r).powi(2), (1.0 - r).powi(2));
            let ce = ki / (8.0 * n);
            let cf = ki * n / 2.0;
            QuadratureVariances {
                omega: s.omega,
                x_pp: 1.0 + kp / np * s.eps_p_sq,
                x_plus_plus: 1.0 + ce * (s.eps_plus_sq * wa + s.eps_minus_sq * wb),
                x_minus_minus: 1.0 + ce * (s.eps_minus_sq * wa + s.eps_plus_sq * wb),
                x_p_plus: (kp * ki).sqrt() * (1.0 + r) / (4.0 * (np * n).sqrt()) * s.eps_p_plus,
                y_pp: 1.0 + 4.0 * kp * np * s.phi_p_sq,
                y_plus_plus: 1.0 + cf * (s.phi_plus_sq * wa + s.phi_minus_sq * wb),
                y_minus_minus: 1.0 + cf * (s.phi_minus_sq * wa + s.phi_plus_sq * wb),
                y_p_plus: (1.0 + r) * (kp * np * ki * n).sqrt() * s.phi_p_plus,
            }
        }
    }
}

fn difference_mode_symmetric(p: &TropoParams, omega: f64) -> (f64, f64) {
    let k = p.kappa;
    let w2 = omega * omega;
    let locked = (k * p.mu / 2.0).powi(2) + w2;
    let free = (k * (1.0 - p.mu / 2.0)).powi(2) + w2;
    (locked / free, free / locked)
}

/// Output variances straight from parameters via the closed-form spectra.
pub fn output_variances_at(
    params: &TropoParams,
    steady: &SteadyState,
    omega: f64,
) -> QuadratureVariances {
    output_variances(params, steady, &spectra::closed_form(params, steady, omega))
}

/// Covariance matrix ordered `(X_p, X_i, X_s, Y_p, Y_i, Y_s)`, vacuum = identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix6 {
    pub omega: f64,
    pub m: Matrix6<f64>,
}

fn sum_difference_rotation() -> Matrix3<f64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Matrix3::new(1.0, 0.0, 0.0, 0.0, h, h, 0.0, h, -h)
}

fn block_rotation() -> Matrix6<f64> {
    let r = sum_difference_rotation();
    let mut big = Matrix6::zeros();
    big.fixed_view_mut::<3, 3>(0, 0).copy_from(&r);
    big.fixed_view_mut::<3, 3>(3, 3).copy_from(&r);
    big
}

impl CovarianceMatrix6 {
    /// The same matrix in the `(X_p, X_+, X_-, Y_p, Y_+, Y_-)` orthonormal basis.
    pub fn to_sum_difference_basis(&self) -> Matrix6<f64> {
        let r = block_rotation();
        r * self.m * r.transpose()
    }

    /// Reads the (p, ±) variances back out of the matrix.
    pub fn quadrature_variances(&self) -> QuadratureVariances {
        let b = self.to_sum_difference_basis();
        QuadratureVariances {
            omega: self.omega,
            x_pp: b[(0, 0)],
            x_plus_plus: b[(1, 1)],
            x_minus_minus: b[(2, 2)],
            x_p_plus: b[(0, 1)],
            y_pp: b[(3, 3)],
            y_plus_plus: b[(4, 4)],
            y_minus_minus: b[(5, 5)],
            y_p_plus: b[(3, 4)],
        }
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant()
    }

    /// Determinant of the principal submatrix on `indices`.
    pub fn principal_minor(&self, indices: &[usize]) -> f64 {
        let n = indices.len();
        DMatrix::from_fn(n, n, |r, c| self.m[(indices[r], indices[c])]).determinant()
    }
}

pub fn covariance6(vars: &QuadratureVariances) -> Result<CovarianceMatrix6> {
    let v = vars;
    let diag = [
        v.x_pp,
        v.x_plus_plus,
        v.x_minus_minus,
        v.y_pp,
        v.y_plus_plus,
        v.y_minus_minus,
    ];
    let mut b = Matrix6::from_diagonal(&nalgebra::Vector6::from_row_slice(&diag));
    b[(0, 1)] = v.x_p_plus;
    b[(1, 0)] = v.x_p_plus;
    b[(3, 4)] = v.y_p_plus;
    b[(4, 3)] = v.y_p_plus;
    let r = block_rotation();
    let m = r.transpose() * b * r;
    let m = (m + m.transpose()) * 0.5;
    if let Some(k) = (0..6).find(|&k| !(m[(k, k)] > 0.0)) {
        return Err(Error::NonPositiveDefinite(format!(
            "diagonal entry {k} is {}",
            m[(k, k)]
        )));
    }
    Ok(CovarianceMatrix6 { omega: v.omega, m })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityReport {
    pub omega: f64,
    pub purity_total: f64,
    /// Purity of the signal-idler state after tracing out the pump.
    pub purity_partial_is: f64,
    pub factor_n_minus: f64,
    pub factor_dx: f64,
    pub factor_dy: f64,
}

impl PurityReport {
    /// `1/√(N_- D_X D_Y)`.
    pub fn factored_purity(&self) -> f64 {
        1.0 / (self.factor_n_minus * self.factor_dx * self.factor_dy).sqrt()
    }
}

/// Signal and idler quadratures within the 6x6 ordering.
pub const SIGNAL_IDLER_INDICES: [usize; 4] = [1, 2, 4, 5];

pub fn spectral_purity(cov: &CovarianceMatrix6) -> Result<PurityReport> {
    let full = DMatrix::from_column_slice(6, 6, cov.m.as_slice());
    let det = linalg::spd_determinant(&full, "output covariance matrix")?;
    let idx = SIGNAL_IDLER_INDICES;
    let sub = DMatrix::from_fn(4, 4, |r, c| cov.m[(idx[r], idx[c])]);
    let det_is = linalg::spd_determinant(&sub, "signal-idler covariance matrix")?;
    let v = cov.quadrature_variances();
    Ok(PurityReport {
        omega: cov.omega,
        purity_total: 1.0 / det.sqrt(),
        purity_partial_is: 1.0 / det_is.sqrt(),
        factor_n_minus: v.n_minus(),
        factor_dx: v.d_x(),
        factor_dy: v.d_y(),
    })
}

/// Purity report at one frequency using the closed-form spectra.
pub fn purity_at(params: &TropoParams, steady: &SteadyState, omega: f64) -> Result<PurityReport> {
    spectral_purity(&covariance6(&output_variances_at(params, steady, omega))?)
}

/// Squeezing and entanglement indicators in the strong pump-damping limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingReport {
    pub omega: f64,
    /// `4<dX_i^2> = 4<dX_s^2>`.
    pub x_is_variance: f64,
    /// `4<dY_p^2>`.
    pub y_p_variance: f64,
    /// `2<dX_-^2>`.
    pub duan_x_minus: f64,
    /// `2<dY_+^2>`.
    pub duan_y_plus: f64,
    /// Inseparability witness: both entries of the Duan pair below 1.
    pub duan_satisfied: bool,
    /// `2<dX_+^2> 2<dY_+^2>`.
    pub n_plus: f64,
    /// `4<dX_p^2> 4<dY_p^2>`.
    pub n_pump: f64,
}

/// Evaluates the squeezing spectra in the limit `kappa, kappa (mu_p-1) << kappa_p`.
///
/// The single-beam and pump formulas are the leading terms in `mu`; the Duan
/// pair and the excess-noise products keep the first-order `mu` terms.
pub fn squeezing_entanglement(params: &TropoParams, omega: f64) -> Result<SqueezingReport> {
    params.check()?;
    params.require_symmetric("squeezing_entanglement")?;
    let (k, mp, mu) = (params.kappa, params.mu_p, params.mu);
    let k2 = k * k;
    let w2 = omega * omega;
    let om = 1.0 - mu;
    let lorentz = |rate: f64| k2 / (k2 * rate * rate + w2);
    let x_is_variance = 1.0 + 0.5 * lorentz(mp - 1.0 + mu / 4.0) - 0.5 * lorentz(1.0);
    let y_p_variance = 1.0 - 2.0 * (mp - 1.0) * lorentz(mp);
    let amp_rate = mu / 2.0 + om * (mp - 1.0);
    let phase_rate = mu / 2.0 + om * mp;
    let duan_x_minus = (k2 * (mu / 2.0).powi(2) + w2) / (k2 * (1.0 - mu / 2.0).powi(2) + w2);
    let duan_y_plus = 1.0 - om * lorentz(phase_rate);
    let x_plus = 1.0 + om * lorentz(amp_rate);
    let x_pump = 1.0 + 2.0 * (mp - 1.0) * om * om * lorentz(amp_rate);
    let y_pump = 1.0 - 2.0 * om * om * (mp - 1.0) * lorentz(phase_rate);
    Ok(SqueezingReport {
        omega,
        x_is_variance,
        y_p_variance,
        duan_x_minus,
        duan_y_plus,
        duan_satisfied: duan_x_minus < 1.0 && duan_y_plus < 1.0,
        n_plus: x_plus * duan_y_plus,
        n_pump: x_pump * y_pump,
    })
}

/// Zero-frequency `N_+ = N_p` value for `mu_p - 1 >> mu`.
pub fn excess_noise_limit(mu_p: f64) -> f64 {
    ((mu_p - 1.0).powi(2) + 1.0) / (mu_p * mu_p) * (mu_p + 1.0) / (mu_p - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::steady_state;

    fn setup(mode: InjectionMode, mu_p: f64, mu: f64) -> (TropoParams, SteadyState) {
        let p = TropoParams {
            injection: mode,
            ..TropoParams::symmetric(1.0, 100.0, mu_p, mu, 0.01)
        };
        (p, steady_state(&p).unwrap())
    }

    #[test]
    fn vacuum_gives_identity_and_unit_purity() {
        let c = covariance6(&QuadratureVariances::vacuum(0.0)).unwrap();
        assert!((c.m - Matrix6::identity()).norm() < 1e-15);
        let r = spectral_purity(&c).unwrap();
        assert!((r.purity_total - 1.0).abs() < 1e-15);
        assert!((r.purity_partial_is - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_round_trip() {
        let (p, s) = setup(InjectionMode::Symmetric, 1.1, 0.1);
        let v = output_variances_at(&p, &s, 0.3);
        let back = covariance6(&v).unwrap().quadrature_variances();
        let a = [
            v.x_pp,
            v.x_plus_plus,
            v.x_minus_minus,
            v.x_p_plus,
            v.y_pp,
            v.y_plus_plus,
            v.y_minus_minus,
            v.y_p_plus,
        ];
        let b = [
            back.x_pp,
            back.x_plus_plus,
            back.x_minus_minus,
            back.x_p_plus,
            back.y_pp,
            back.y_plus_plus,
            back.y_minus_minus,
            back.y_p_plus,
        ];
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn individual_entries_follow_sum_difference_split() {
        let (p, s) = setup(InjectionMode::Symmetric, 2.0, 0.1);
        let v = output_variances_at(&p, &s, 0.0);
        let c = covariance6(&v).unwrap();
        let single = 0.5 * (v.x_plus_plus + v.x_minus_minus);
        assert!((c.m[(1, 1)] - single).abs() < 1e-14);
        assert!((c.m[(2, 2)] - single).abs() < 1e-14);
        assert!((c.m[(1, 2)] - 0.5 * (v.x_plus_plus - v.x_minus_minus)).abs() < 1e-14);
        assert!((c.m[(0, 1)] - v.x_p_plus * std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        for r in 0..3 {
            for q in 3..6 {
                assert_eq!(c.m[(r, q)], 0.0);
            }
        }
    }

    #[test]
    fn near_threshold_dip_at_zero_frequency() {
        let (p, s) = setup(InjectionMode::Symmetric, 1.1, 0.1);
        let at_zero = purity_at(&p, &s, 0.0).unwrap();
        assert!(at_zero.purity_total < 0.5);
        assert!((at_zero.purity_total - at_zero.factored_purity()).abs() < 1e-12);
        let far = purity_at(&p, &s, 1e3).unwrap();
        assert!(far.purity_total > 0.999);
    }

    #[test]
    fn asymmetric_half_purity() {
        let (p, s) = setup(InjectionMode::Asymmetric, 6.0, 0.01);
        let r = purity_at(&p, &s, 0.0).unwrap();
        assert!((r.purity_total - 0.5).abs() < 0.02, "{}", r.purity_total);
    }

    #[test]
    fn non_positive_diagonal_is_rejected() {
        let mut v = QuadratureVariances::vacuum(0.0);
        v.x_minus_minus = -3.0;
        assert!(matches!(
            covariance6(&v),
            Err(Error::NonPositiveDefinite(_))
        ));
    }

    #[test]
    fn indefinite_matrix_is_rejected_by_purity() {
        let mut v = QuadratureVariances::vacuum(0.0);
        v.x_p_plus = 2.0;
        let c = covariance6(&v).unwrap();
        assert!(matches!(
            spectral_purity(&c),
            Err(Error::NonPositiveDefinite(_))
        ));
    }

    #[test]
    fn squeezing_golden_values() {
        let p = TropoParams::symmetric(1.0, 100.0, 2.0, 0.1, 0.01);
        let r = squeezing_entanglement(&p, 0.0).unwrap();
        assert_eq!(r.y_p_variance, 0.5);
        assert!(r.duan_satisfied);
        let strong = TropoParams::symmetric(1.0, 1e5, 200.0, 0.01, 0.01);
        let r = squeezing_entanglement(&strong, 0.0).unwrap();
        assert!((r.x_is_variance - 0.5).abs() < 0.005);
    }

    #[test]
    fn squeezing_requires_symmetric_injection() {
        let p = TropoParams::asymmetric(1.0, 100.0, 2.0, 0.1, 0.01);
        assert!(squeezing_entanglement(&p, 0.0)
            .unwrap_err()
            .is_invalid_input());
    }
}
