//! Intracavity noise spectra: closed forms and the resolvent oracle.
//!
//! Fluctuations are split into photon-number deviations `eps` and phase
//! deviations `phi` of the pump (`p`), the signal+idler sum (`plus`) and the
//! signal-idler difference (`minus`). The linearized dynamics decouple into
//! four blocks: `{eps_p, eps_plus}`, `{eps_minus}`, `{phi_p, phi_plus}` and
//! `{phi_minus}`. Diffusion entries are signed: several are negative, which is
//! the quasi-probability signature of nonclassical noise.

use nalgebra::{dmatrix, DMatrix};

use crate::error::{Error, Result};
use crate::model::{InjectionMode, SteadyState, TropoParams};
use crate::numerics::linalg;

/// The eight intracavity spectral densities at one noise frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSet {
    pub omega: f64,
    pub eps_plus_sq: f64,
    pub eps_p_sq: f64,
    pub eps_p_plus: f64,
    pub eps_minus_sq: f64,
    pub phi_p_sq: f64,
    pub phi_plus_sq: f64,
    pub phi_p_plus: f64,
    pub phi_minus_sq: f64,
}

impl SpectralSet {
    pub const FIELD_NAMES: [&'static str; 8] = [
        "eps_plus_sq",
        "eps_p_sq",
        "eps_p_plus",
        "eps_minus_sq",
        "phi_p_sq",
        "phi_plus_sq",
        "phi_p_plus",
        "phi_minus_sq",
    ];

    pub fn values(&self) -> [f64; 8] {
        [
            self.eps_plus_sq,
            self.eps_p_sq,
            self.eps_p_plus,
            self.eps_minus_sq,
            self.phi_p_sq,
            self.phi_plus_sq,
            self.phi_p_plus,
            self.phi_minus_sq,
        ]
    }

    fn from_values(omega: f64, v: [f64; 8]) -> Self {
        SpectralSet {
            omega,
            eps_plus_sq: v[0],
            eps_p_sq: v[1],
            eps_p_plus: v[2],
            eps_minus_sq: v[3],
            phi_p_sq: v[4],
            phi_plus_sq: v[5],
            phi_p_plus: v[6],
            phi_minus_sq: v[7],
        }
    }
}

pub fn closed_form(params: &TropoParams, steady: &SteadyState, omega: f64) -> SpectralSet {
    closed_form_with_coefficient_scale(params, steady, omega, [1.0; 8])
}

/// Closed forms with each density multiplied by `scale[k]` (field order of
/// [`SpectralSet::FIELD_NAMES`]). Exists so the oracle comparison can be shown
/// to detect small coefficient errors.
#[doc(hidden)]
pub fn closed_form_with_coefficient_scale(
    params: &TropoParams,
    steady: &SteadyState,
    omega: f64,
    scale: [f64; 8],
) -> SpectralSet {
    let v = match params.injection {
        InjectionMode::Symmetric => symmetric_densities(params, steady, omega),
        InjectionMode::Asymmetric => asymmetric_densities(params, steady, omega),
    };
    let mut out = [0.0; 8];
    for k in 0..8 {
        out[k] = v[k] * scale[k];
    }
    SpectralSet::from_values(omega, out)
}

fn symmetric_densities(p: &TropoParams, s: &SteadyState, w: f64) -> [f64; 8] {
    let (k, kp, mp, mu) = (p.kappa, p.kappa_p, p.mu_p, p.mu);
    let (n, np) = (s.n_signal, s.n_pump);
    let w2 = w * w;
    let om = 1.0 - mu;
    let amp_rate = mu / 2.0 + (mp - 1.0) * om;
    let phase_rate = mu / 2.0 + mp * om;
    let lam_eps = (2.0 * w2 - kp * k * amp_rate).powi(2) + w2 * (kp + k * mu).powi(2);
    let lam_phi =
        (2.0 * w2 - k * kp * phase_rate).powi(2) + w2 * (kp + 2.0 * k * (1.0 - mu / 2.0)).powi(2);
    let band = kp * kp + 4.0 * w2;
    [
        2.0 * n * k * om * band / lam_eps,
        2.0 * np * k * k * kp * om * om * (mp - 1.0) / lam_eps,
        -2.0 * n * k * k * kp * om * om / lam_eps,
        -2.0 * n * k * om / ((k * (1.0 - mu / 2.0)).powi(2) + w2),
        -k * k * kp * (mp - 1.0) * om * om / (2.0 * np * lam_phi),
        -k * om * band / (2.0 * n * lam_phi),
        k * kp * kp * (mp - 1.0) * om / (2.0 * n * lam_phi),
        k * om / (2.0 * n * ((k * mu / 2.0).powi(2) + w2)),
    ]
}

fn asymmetric_densities(p: &TropoParams, s: &SteadyState, w: f64) -> [f64; 8] {
    let (ki, kp, mp, mu) = (p.kappa_idler(), p.kappa_p, p.mu_p, p.mu);
    let ks = p.kappa_signal();
    let r = (1.0 - mu).sqrt();
    let (n, np) = (s.n_signal, s.n_pump);
    let w2 = w * w;
    let diff_rate = 1.0 - 0.75 * mu;
    let lam_eps = (2.0 * w2 - kp * ki * (mu / 4.0 + (mp - 1.0) * r)).powi(2)
        + w2 * (kp + ki * mu / 2.0).powi(2);
    let lam_phi = (2.0 * w2 - ki * kp * (diff_rate + (mp - 1.0) * r)).powi(2)
        + w2 * (kp + 2.0 * ki * diff_rate).powi(2);
    let band = kp * kp + 4.0 * w2;
    [
        2.0 * n * ks * band / lam_eps,
        2.0 * np * (mp - 1.0) * ks * ks * kp / lam_eps,
        -2.0 * n * ks * ks * kp / lam_eps,
        -2.0 * n * ks / ((ki * diff_rate).powi(2) + w2),
        -(mp - 1.0) * ki * ks * kp / (2.0 * np * lam_phi),
        -ks * band / (2.0 * n * lam_phi),
        ki * kp * kp * (mp - 1.0) * r / (2.0 * n * lam_phi),
        ks / (2.0 * n * ((ki * mu / 4.0).powi(2) + w2)),
    ]
}

/// Linear Langevin block `dx/dt = A x + noise`, noise correlations `D delta(t-t')`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearNoiseSystem {
    name: &'static str,
    drift: DMatrix<f64>,
    diffusion: DMatrix<f64>,
}

impl LinearNoiseSystem {
    /// Builds a block, rejecting drifts with any eigenvalue of non-negative real part.
    pub fn new(name: &'static str, drift: DMatrix<f64>, diffusion: DMatrix<f64>) -> Result<Self> {
        assert!(drift.is_square() && drift.shape() == diffusion.shape());
        let max_real = linalg::max_real_eigenvalue(&drift);
        if !(max_real < 0.0) {
            return Err(Error::UnstableSystem {
                block: name,
                max_real,
            });
        }
        Ok(LinearNoiseSystem {
            name,
            drift,
            diffusion,
        })
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn drift(&self) -> &DMatrix<f64> {
        &self.drift
    }

    pub fn diffusion(&self) -> &DMatrix<f64> {
        &self.diffusion
    }

    pub fn dim(&self) -> usize {
        self.drift.nrows()
    }

    /// Equal-time second moments, `A S + S A^T + D = 0`.
    pub fn stationary_covariance(&self) -> Result<DMatrix<f64>> {
        linalg::lyapunov(&self.drift, &self.diffusion)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBlocks {
    /// `{eps_p, eps_plus}`.
    pub amplitude_sum: LinearNoiseSystem,
    /// `{eps_minus}`.
    pub amplitude_difference: LinearNoiseSystem,
    /// `{phi_p, phi_plus}`.
    pub phase_sum: LinearNoiseSystem,
    /// `{phi_minus}`.
    pub phase_difference: LinearNoiseSystem,
}

impl NoiseBlocks {
    pub fn iter(&self) -> impl Iterator<Item = &LinearNoiseSystem> {
        [
            &self.amplitude_sum,
            &self.amplitude_difference,
            &self.phase_sum,
            &self.phase_difference,
        ]
        .into_iter()
    }
}

pub fn build_blocks(params: &TropoParams, steady: &SteadyState) -> Result<NoiseBlocks> {
    params.check()?;
    let (kp, mp, mu) = (params.kappa_p, params.mu_p, params.mu);
    let n = steady.n_signal;
    let (a_sum, d_sum, a_diff, d_diff, f_sum, g_sum, f_diff, g_diff);
    match params.injection {
        InjectionMode::Symmetric => {
            let k = params.kappa;
            let om = 1.0 - mu;
            a_sum = dmatrix![-kp / 2.0, -k * om / 2.0; kp * (mp - 1.0), -k * mu / 2.0];
            d_sum = 2.0 * k * n * om;
            a_diff = -k * (1.0 - mu / 2.0);
            d_diff = -2.0 * k * n * om;
            f_sum = dmatrix![-kp / 2.0, -kp * (mp - 1.0) / 2.0; k * om, -k * (1.0 - mu / 2.0)];
            g_sum = -k * om / (2.0 * n);
            f_diff = -k * mu / 2.0;
            g_diff = k * om / (2.0 * n);
        }
        InjectionMode::Asymmetric => {
            let ki = params.kappa_idler();
            let ks = params.kappa_signal();
            let r = (1.0 - mu).sqrt();
            let diff_rate = ki * (1.0 - 0.75 * mu);
            a_sum = dmatrix![-kp / 2.0, -ks / 2.0; kp * (mp - 1.0) / r, -ki * mu / 4.0];
            d_sum = 2.0 * ks * n;
            a_diff = -diff_rate;
            d_diff = -2.0 * ks * n;
            f_sum = dmatrix![-kp / 2.0, -kp * (mp - 1.0) / (2.0 * r); ks, -diff_rate];
            g_sum = -ks / (2.0 * n);
            f_diff = -ki * mu / 4.0;
            g_diff = ks / (2.0 * n);
        }
    }
    Ok(NoiseBlocks {
        amplitude_sum: LinearNoiseSystem::new(
            "amplitude sum",
            a_sum,
            dmatrix![0.0, 0.0; 0.0, d_sum],
        )?,
        amplitude_difference: LinearNoiseSystem::new(
            "amplitude difference",
            dmatrix![a_diff],
            dmatrix![d_diff],
        )?,
        phase_sum: LinearNoiseSystem::new("phase sum", f_sum, dmatrix![0.0, 0.0; 0.0, g_sum])?,
        phase_difference: LinearNoiseSystem::new(
            "phase difference",
            dmatrix![f_diff],
            dmatrix![g_diff],
        )?,
    })
}

/// Hermiticity tolerance of the resolvent sandwich, relative to its norm.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Spectral matrix `S = (i w I - A)^-1 D (-i w I - A^T)^-1` of a block.
///
/// `S` is hermitian; off-diagonal entries carry an imaginary part odd in
/// `omega`. The symmetric (real) part is returned, which is what the
/// symmetrized two-time correlators and the closed forms represent.
pub fn oracle_spectrum(block: &LinearNoiseSystem, omega: f64) -> Result<DMatrix<f64>> {
    let res = linalg::resolvent(&block.drift, omega)?;
    let d = block.diffusion.map(|x| nalgebra::Complex::new(x, 0.0));
    let s = &res * d * res.adjoint();
    let norm = s.norm();
    let residual = if norm > 0.0 {
        (&s - s.adjoint()).norm() / norm
    } else {
        0.0
    };
    if !(residual <= HERMITIAN_TOLERANCE) {
        return Err(Error::NonHermitianSpectrum { omega, residual });
    }
    let sym = (&s + s.transpose()) * nalgebra::Complex::new(0.5, 0.0);
    let imag = sym.map(|z| z.im).norm();
    if !(imag <= HERMITIAN_TOLERANCE * norm.max(f64::MIN_POSITIVE)) {
        return Err(Error::NonHermitianSpectrum {
            omega,
            residual: imag / norm,
        });
    }
    Ok(sym.map(|z| z.re))
}

/// All eight densities assembled from the four oracle blocks.
pub fn oracle_set(blocks: &NoiseBlocks, omega: f64) -> Result<SpectralSet> {
    let a = oracle_spectrum(&blocks.amplitude_sum, omega)?;
    let am = oracle_spectrum(&blocks.amplitude_difference, omega)?;
    let f = oracle_spectrum(&blocks.phase_sum, omega)?;
    let fm = oracle_spectrum(&blocks.phase_difference, omega)?;
    Ok(SpectralSet {
        omega,
        eps_plus_sq: a[(1, 1)],
        eps_p_sq: a[(0, 0)],
        eps_p_plus: a[(0, 1)],
        eps_minus_sq: am[(0, 0)],
        phi_p_sq: f[(0, 0)],
        phi_plus_sq: f[(1, 1)],
        phi_p_plus: f[(0, 1)],
        phi_minus_sq: fm[(0, 0)],
    })
}
