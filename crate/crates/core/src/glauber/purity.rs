//! Stationary purity of the outside-cavity state as a product of four
//! Gaussian overlap factors.
//!
//! Each factor has the form `E[exp(-Δᵀ B Δ / 2)]` with `Δ = x - x'` the
//! difference of two independent draws from a block of the quasi-probability
//! and `B` fixed by the coherent-state overlap kernel. For second moments `Σ`
//! and kernel covariance `K = B⁻¹` this equals `√(det K / det(K + 2Σ))`.
//! Blocks with negative variance are admissible as long as `K + 2Σ` stays
//! positive definite (the kernel dominates); otherwise the overlap diverges.

use nalgebra::{dmatrix, DMatrix};

use super::StationaryMoments;
use crate::error::{Error, Result};
use crate::model::{SteadyState, Transmission, TropoParams};
use crate::numerics::gauss_hermite::GaussHermite;
use crate::numerics::linalg;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPurity {
    /// `(eps_p, eps_+)` factor.
    pub pi1: f64,
    /// `eps_-` factor.
    pub pi2: f64,
    /// `(phi_p, phi_+)` factor.
    pub pi3: f64,
    /// `phi_-` factor.
    pub pi4: f64,
    pub pi_st: f64,
    /// `mu (mu_p - 1/2)/(mu/2 + mu_p - 1)`.
    pub nu: f64,
    /// `√mu`, the intracavity reference value.
    pub pi_intracavity: f64,
}

/// Kernel covariances `K` of the four factors, given intracavity photon numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapKernels {
    pub amplitude_sum: DMatrix<f64>,
    pub amplitude_difference: f64,
    pub phase_sum: DMatrix<f64>,
    pub phase_difference: f64,
}

impl OverlapKernels {
    /// Kernels `exp(-Δ_p²/4N_pT_p - Δ_+²/8NT)`, `exp(-Δ_-²/8NT)`,
    /// `exp(-Δ_p² N_pT_p - Δ_+² NT/2)` and `exp(-Δ_-² NT/2)`.
    pub fn new(n_signal: f64, n_pump: f64, t: Transmission) -> Self {
        let (nt, npt) = (n_signal * t.signal, n_pump * t.pump);
        OverlapKernels {
            amplitude_sum: dmatrix![2.0 * npt, 0.0; 0.0, 4.0 * nt],
            amplitude_difference: 4.0 * nt,
            phase_sum: dmatrix![1.0 / (2.0 * npt), 0.0; 0.0, 1.0 / nt],
            phase_difference: 1.0 / nt,
        }
    }
}

/// `√(det K / det(K + 2Σ))`, failing if `K + 2Σ` is not positive definite.
pub fn gaussian_overlap(
    sigma: &DMatrix<f64>,
    kernel: &DMatrix<f64>,
    factor: &'static str,
) -> Result<f64> {
    let widened = kernel + sigma * 2.0;
    let det_w = widened
        .clone()
        .cholesky()
        .map(|c| c.l().diagonal().iter().map(|d| d * d).product::<f64>())
        .ok_or(Error::DivergentPurityIntegral { factor })?;
    let det_k = linalg::spd_determinant(kernel, "overlap kernel")?;
    Ok((det_k / det_w).sqrt())
}

fn amplitude_sigma(m: &StationaryMoments) -> DMatrix<f64> {
    let a = &m.amplitude;
    dmatrix![a.var_eps_p, a.cov_eps; a.cov_eps, a.var_eps_plus]
}

fn phase_sigma(m: &StationaryMoments) -> DMatrix<f64> {
    dmatrix![m.var_phi_p, m.cov_phi; m.cov_phi, m.var_phi_plus]
}

/// The four factors for given (already rescaled) moments.
///
/// `kernels` uses intracavity photon numbers; `moments` may be outside-cavity.
pub fn purity_factors(moments: &StationaryMoments, kernels: &OverlapKernels) -> Result<[f64; 4]> {
    Ok([
        gaussian_overlap(&amplitude_sigma(moments), &kernels.amplitude_sum, "pi1")?,
        gaussian_overlap(
            &dmatrix![moments.var_eps_minus],
            &dmatrix![kernels.amplitude_difference],
            "pi2",
        )?,
        gaussian_overlap(&phase_sigma(moments), &kernels.phase_sum, "pi3")?,
        gaussian_overlap(
            &dmatrix![moments.var_phi_minus],
            &dmatrix![kernels.phase_difference],
            "pi4",
        )?,
    ])
}

pub fn nu(params: &TropoParams) -> f64 {
    params.mu * (params.mu_p - 0.5) / (params.mu / 2.0 + params.mu_p - 1.0)
}

pub fn stationary_purity(params: &TropoParams, steady: &SteadyState) -> Result<StationaryPurity> {
    let intra = StationaryMoments::intracavity(params, steady)?;
    let out = intra.rescaled(params.transmission);
    let kernels = OverlapKernels::new(steady.n_signal, steady.n_pump, params.transmission);
    let [pi1, pi2, pi3, pi4] = purity_factors(&out, &kernels)?;
    Ok(StationaryPurity {
        pi1,
        pi2,
        pi3,
        pi4,
        pi_st: pi1 * pi2 * pi3 * pi4,
        nu: nu(params),
        pi_intracavity: params.mu.sqrt(),
    })
}

/// The same four factors for the intracavity state (unit transmissions).
pub fn intracavity_factors(params: &TropoParams, steady: &SteadyState) -> Result<[f64; 4]> {
    let intra = StationaryMoments::intracavity(params, steady)?;
    let kernels = OverlapKernels::new(steady.n_signal, steady.n_pump, Transmission::default());
    purity_factors(&intra, &kernels)
}

/// Independent evaluation of an overlap factor for a positive-definite block.
///
/// Integrates the literal kernel `exp(-sum_k Δ_k²/s_k)` against the density
/// of `Δ = x - x'` (normal with covariance `2Σ`, the exact convolution of the
/// two draws) with a tensor Gauss-Hermite rule in whitened coordinates.
pub fn overlap_by_quadrature(
    sigma: &DMatrix<f64>,
    kernel_widths: &[f64],
    nodes: usize,
) -> Result<f64> {
    let d = sigma.nrows();
    assert!(d == kernel_widths.len() && (d == 1 || d == 2));
    let chol = (sigma * 2.0)
        .cholesky()
        .ok_or_else(|| Error::NonPositiveDefinite("quadrature needs a positive block".into()))?;
    let l = chol.l();
    let gh = GaussHermite::new(nodes);
    let kernel = |delta: &[f64]| -> f64 {
        (-delta
            .iter()
            .zip(kernel_widths)
            .map(|(x, s)| x * x / s)
            .sum::<f64>())
        .exp()
    };
    let mut total = 0.0;
    if d == 1 {
        for (z, w) in gh.nodes.iter().zip(&gh.weights) {
            total += w * kernel(&[l[(0, 0)] * z]);
        }
    } else {
        for (z1, w1) in gh.nodes.iter().zip(&gh.weights) {
            let mut inner = 0.0;
            for (z2, w2) in gh.nodes.iter().zip(&gh.weights) {
                let d0 = l[(0, 0)] * z1;
                let d1 = l[(1, 0)] * z1 + l[(1, 1)] * z2;
                inner += w2 * kernel(&[d0, d1]);
            }
            total += w1 * inner;
        }
    }
    Ok(total)
}

/// Widths `s_k` of the literal kernels `exp(-Δ_k²/s_k)` for the `(eps_p, eps_+)`
/// and `phi_-` factors.
pub fn literal_kernel_widths(n_signal: f64, n_pump: f64, t: Transmission) -> ([f64; 2], f64) {
    (
        [4.0 * n_pump * t.pump, 8.0 * n_signal * t.signal],
        2.0 / (n_signal * t.signal),
    )
}

/// Factors `pi1` and `pi4` by quadrature, for comparison with the closed forms.
pub fn quadrature_pi1_pi4(
    params: &TropoParams,
    steady: &SteadyState,
    nodes: usize,
) -> Result<(f64, f64)> {
    let out = StationaryMoments::intracavity(params, steady)?.rescaled(params.transmission);
    let (amp_widths, phase_width) =
        literal_kernel_widths(steady.n_signal, steady.n_pump, params.transmission);
    let pi1 = overlap_by_quadrature(&amplitude_sigma(&out), &amp_widths, nodes)?;
    let pi4 = overlap_by_quadrature(&dmatrix![out.var_phi_minus], &[phase_width], nodes)?;
    Ok((pi1, pi4))
}
