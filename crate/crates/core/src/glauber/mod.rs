//! Stationary Glauber quasi-probability: Gaussian amplitude block, signed
//! (distributional) moments, intracavity Fano factors, outside-cavity
//! rescaling and the stationary purity.
//!
//! Only symmetric injection is covered.

pub mod moments;
pub mod purity;

use crate::error::{Error, Result};
use crate::model::{SteadyState, Transmission, TropoParams};
use crate::spectra;

pub use moments::{formal_series_moments, stationary_moments, MomentTable};
pub use purity::{stationary_purity, StationaryPurity};

/// Second moments of `(eps_p, eps_plus)` together with the parameters of the
/// equivalent Gaussian `exp(-(eps_p - a eps_+)^2/2D_p - eps_+^2/2D_+)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeMoments {
    pub var_eps_p: f64,
    pub var_eps_plus: f64,
    pub cov_eps: f64,
}

impl AmplitudeMoments {
    pub fn d_plus(&self) -> f64 {
        self.var_eps_plus
    }

    pub fn d_p(&self) -> f64 {
        self.var_eps_p - self.cov_eps * self.cov_eps / self.var_eps_plus
    }

    pub fn regression(&self) -> f64 {
        self.cov_eps / self.var_eps_plus
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeBlock {
    pub d_plus: f64,
    pub d_p: f64,
    /// Regression coefficient of `eps_p` on `eps_plus`.
    pub a: f64,
    pub var_eps_plus: f64,
    pub var_eps_p: f64,
    pub cov_eps: f64,
    /// `<eps_-^2> = -N`, the small-injection value.
    pub var_eps_minus: f64,
    /// Leading order in `kappa/kappa_p` and `mu`.
    pub limit: AmplitudeMoments,
}

impl AmplitudeBlock {
    pub fn moments(&self) -> AmplitudeMoments {
        AmplitudeMoments {
            var_eps_p: self.var_eps_p,
            var_eps_plus: self.var_eps_plus,
            cov_eps: self.cov_eps,
        }
    }
}

/// Solves the stationary second-moment equations of the `(eps_p, eps_plus)` block.
///
/// The variances are the exact solution at finite `mu` and `kappa/kappa_p`;
/// `limit` holds the leading-order values.
pub fn amplitude_block(params: &TropoParams, steady: &SteadyState) -> Result<AmplitudeBlock> {
    params.check()?;
    params.require_symmetric("amplitude_block")?;
    let (k, kp, mp, mu) = (params.kappa, params.kappa_p, params.mu_p, params.mu);
    let (n, np) = (steady.n_signal, steady.n_pump);
    let om = 1.0 - mu;
    let rate = mu / 2.0 + (mp - 1.0) * om;
    let damp = kp + k * mu;
    let exact = AmplitudeMoments {
        var_eps_plus: n * om * (kp + 2.0 * k * rate) / (rate * damp),
        cov_eps: -n * k * om * om / (rate * damp),
        var_eps_p: n * k * k * om.powi(3) / (kp * damp * rate),
    };
    let den = mu / 2.0 + mp - 1.0;
    let limit = AmplitudeMoments {
        var_eps_plus: n / den,
        var_eps_p: np * (mp - 1.0) / den * k / kp,
        cov_eps: -np * (mp - 1.0) / den,
    };
    Ok(AmplitudeBlock {
        d_plus: exact.d_plus(),
        d_p: exact.d_p(),
        a: exact.regression(),
        var_eps_plus: exact.var_eps_plus,
        var_eps_p: exact.var_eps_p,
        cov_eps: exact.cov_eps,
        var_eps_minus: -n,
        limit,
    })
}

/// Leading-order `D_+`, `D_p` and `a`.
pub fn amplitude_limit_parameters(params: &TropoParams, steady: &SteadyState) -> (f64, f64, f64) {
    let (k, kp, mp, mu) = (params.kappa, params.kappa_p, params.mu_p, params.mu);
    let den = mu / 2.0 + mp - 1.0;
    (
        steady.n_signal / den,
        steady.n_pump * (mp - 1.0) / den * mu * k / kp,
        -k / kp,
    )
}

/// Moments `<eps_-^{2k}>` of the difference-amplitude distribution, from its
/// formal delta-derivative series with variance `-N`.
pub fn difference_amplitude_moments(steady: &SteadyState, max_order: usize) -> Vec<f64> {
    formal_series_moments(-steady.n_signal, max_order)
}

/// Intracavity Fano factors `(F_is, F_p)` in the strong pump-damping limit.
pub fn fano_intracavity(params: &TropoParams) -> Result<(f64, f64)> {
    params.check()?;
    params.require_symmetric("fano_intracavity")?;
    let den = params.mu / 2.0 + params.mu_p - 1.0;
    Ok((0.25 * (2.0 - params.mu_p) / den + 1.0, 1.0))
}

/// Phase moments: the `(phi_p, phi_plus)` table and the `phi_minus` variance.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseBlock {
    pub var_phi_p: f64,
    pub var_phi_plus: f64,
    pub cov_phi: f64,
    /// `(1 - mu)/(2 mu N)`.
    pub var_phi_minus: f64,
    pub moment_table: MomentTable,
    /// `<phi_-^k>` for `k <= max_order`.
    pub minus_moments: Vec<f64>,
}

/// Default highest total order of the phase moment table.
pub const DEFAULT_PHASE_ORDER: usize = 8;

/// Solves the phase moment hierarchy of the `(phi_p, phi_plus)` and
/// `phi_minus` Fokker-Planck equations.
pub fn phase_moments(
    params: &TropoParams,
    steady: &SteadyState,
    max_order: usize,
) -> Result<PhaseBlock> {
    params.require_symmetric("phase_moments")?;
    if max_order < 2 || max_order % 2 == 1 {
        return Err(Error::invalid(
            "max_order",
            format!("{max_order} must be even and at least 2"),
        ));
    }
    let blocks = spectra::build_blocks(params, steady)?;
    let sum = &blocks.phase_sum;
    let table = stationary_moments(sum.drift(), sum.diffusion(), max_order)?;
    let diff = &blocks.phase_difference;
    let minus =
        moments::stationary_moments_1d(-diff.drift()[(0, 0)], diff.diffusion()[(0, 0)], max_order)?;
    Ok(PhaseBlock {
        var_phi_p: table.get(2, 0).unwrap_or(0.0),
        var_phi_plus: table.get(0, 2).unwrap_or(0.0),
        cov_phi: table.get(1, 1).unwrap_or(0.0),
        var_phi_minus: minus[2],
        moment_table: table,
        minus_moments: minus,
    })
}

/// Leading-order `(<phi_p^2>, <phi_+^2>, <phi_p phi_+>)` for `kappa/kappa_p -> 0`.
pub fn phase_limit_moments(params: &TropoParams, steady: &SteadyState) -> (f64, f64, f64) {
    let (k, kp, mp) = (params.kappa, params.kappa_p, params.mu_p);
    let (n, np) = (steady.n_signal, steady.n_pump);
    (
        -(mp - 1.0) / mp * k / kp / (4.0 * np),
        -1.0 / (4.0 * n * mp),
        k / kp / (mp * 4.0 * np),
    )
}

/// Second moments of the quasi-probability, inside the cavity or rescaled
/// to the outside "thin layer" oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryMoments {
    pub n_signal: f64,
    pub n_pump: f64,
    pub amplitude: AmplitudeMoments,
    pub var_eps_minus: f64,
    pub var_phi_p: f64,
    pub var_phi_plus: f64,
    pub cov_phi: f64,
    pub var_phi_minus: f64,
}

impl StationaryMoments {
    pub fn intracavity(params: &TropoParams, steady: &SteadyState) -> Result<Self> {
        let amp = amplitude_block(params, steady)?;
        let phase = phase_moments(params, steady, 2)?;
        Ok(StationaryMoments {
            n_signal: steady.n_signal,
            n_pump: steady.n_pump,
            amplitude: amp.moments(),
            var_eps_minus: amp.var_eps_minus,
            var_phi_p: phase.var_phi_p,
            var_phi_plus: phase.var_phi_plus,
            cov_phi: phase.cov_phi,
            var_phi_minus: phase.var_phi_minus,
        })
    }

    /// Applies `P_out(alpha) = P(alpha/√T)/T` per mode.
    ///
    /// Photon numbers scale by `T`, so photon-number deviations scale by `T`
    /// and their second moments by `T^2` (`T T_p` for the mixed moment).
    /// Phases are unchanged.
    pub fn rescaled(&self, t: Transmission) -> Self {
        let (ts, tp) = (t.signal, t.pump);
        StationaryMoments {
            n_signal: ts * self.n_signal,
            n_pump: tp * self.n_pump,
            amplitude: AmplitudeMoments {
                var_eps_p: tp * tp * self.amplitude.var_eps_p,
                var_eps_plus: ts * ts * self.amplitude.var_eps_plus,
                cov_eps: ts * tp * self.amplitude.cov_eps,
            },
            var_eps_minus: ts * ts * self.var_eps_minus,
            ..*self
        }
    }
}

/// Outside-cavity moments for the configured transmissions.
pub fn output_pfunction_rescale(
    params: &TropoParams,
    steady: &SteadyState,
) -> Result<StationaryMoments> {
    params.check()?;
    Ok(StationaryMoments::intracavity(params, steady)?.rescaled(params.transmission))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::steady_state;

    fn canonical() -> (TropoParams, SteadyState) {
        let p = TropoParams::symmetric(1.0, 100.0, 2.0, 0.1, 0.01);
        (p, steady_state(&p).unwrap())
    }

    #[test]
    fn regression_identities() {
        let (p, s) = canonical();
        let b = amplitude_block(&p, &s).unwrap();
        assert!((b.d_plus - b.var_eps_plus).abs() <= 1e-12 * b.d_plus);
        let dp = b.var_eps_p - b.cov_eps * b.cov_eps / b.var_eps_plus;
        assert!((b.d_p - dp).abs() <= 1e-12 * b.d_p.abs());
        assert!((b.a - b.cov_eps / b.var_eps_plus).abs() <= 1e-12 * b.a.abs());
        assert!(b.d_plus > 0.0 && b.d_p > 0.0);
        assert_eq!(b.var_eps_minus, -s.n_signal);
    }

    #[test]
    fn fano_values() {
        let (p, _) = canonical();
        assert_eq!(fano_intracavity(&p).unwrap(), (1.0, 1.0));
        let q = TropoParams { mu_p: 6.0, ..p };
        let (f, _) = fano_intracavity(&q).unwrap();
        assert!((f - (1.0 - 1.0 / 5.05)).abs() < 1e-15);
        assert!((f - 0.8020).abs() < 5e-5);
    }

    #[test]
    fn phase_order_must_be_even() {
        let (p, s) = canonical();
        assert!(phase_moments(&p, &s, 3).unwrap_err().is_invalid_input());
        assert!(phase_moments(&p, &s, 0).unwrap_err().is_invalid_input());
    }

    #[test]
    fn unit_transmission_is_identity() {
        let (p, s) = canonical();
        let m = StationaryMoments::intracavity(&p, &s).unwrap();
        assert_eq!(m.rescaled(Transmission::default()), m);
    }

    #[test]
    fn rescaling_of_difference_variance() {
        let (p, s) = canonical();
        let out = output_pfunction_rescale(&p.with_transmission(0.01, 0.02), &s).unwrap();
        assert!((out.var_eps_minus + 1e-4 * s.n_signal).abs() < 1e-12 * s.n_signal);
        assert!((out.n_signal - 0.01 * s.n_signal).abs() < 1e-9);
        assert!((out.n_pump - 0.02 * s.n_pump).abs() < 1e-9);
    }

    #[test]
    fn asymmetric_is_rejected() {
        let p = TropoParams::asymmetric(1.0, 100.0, 2.0, 0.1, 0.01);
        let s = steady_state(&p).unwrap();
        assert!(amplitude_block(&p, &s).unwrap_err().is_invalid_input());
        assert!(phase_moments(&p, &s, 4).unwrap_err().is_invalid_input());
        assert!(fano_intracavity(&p).unwrap_err().is_invalid_input());
    }
}
