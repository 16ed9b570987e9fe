//! Photon-counting statistics of the signal and idler beams.
//!
//! Counting over a window `tau` filters the amplitude noise spectrum with
//! `delta_tau(omega) = sin²(omega tau/2) / (pi tau omega²/2)`, which has unit
//! area and tends to `delta(omega)` for long windows.

use crate::error::{Error, Result};
use crate::model::{SteadyState, TropoParams};
use crate::numerics::quadrature::{self, Estimate, Tolerance};
use crate::spectra;

/// Source of the normalized amplitude spectra `kappa/(2N) (eps_±²)_omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountingKernel {
    /// Single-pole forms of the strong pump-damping, small-injection limit:
    /// `kappa²/((mu/4 + mu_p - 1)² kappa² + omega²)` and `-kappa²/(kappa² + omega²)`.
    #[default]
    Simplified,
    /// The full closed-form intracavity spectra at finite `kappa_p` and `mu`.
    Model,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingStats {
    pub tau: f64,
    /// Mean count per beam, `kappa tau N`.
    pub n_out: f64,
    /// Variance of `n_i + n_s`.
    pub d_plus: f64,
    /// Variance of `n_i - n_s`, clamped at 0.
    pub d_minus: f64,
    pub f_out: f64,
    pub f_in: f64,
    pub lambda: f64,
}

/// Gaussian model of the joint count distribution:
/// `n_+ = n_i + n_s ~ N(mean_sum, var_sum)` and `n_- = n_i - n_s ~ N(0, var_diff)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    pub mean_sum: f64,
    pub var_sum: f64,
    pub var_diff: f64,
}

/// Probabilities on the integer lattice, row-major in `n_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointGrid {
    pub n_i_start: i64,
    pub n_s_start: i64,
    pub size: usize,
    pub probabilities: Vec<f64>,
    /// Lattice sum before renormalization.
    pub raw_mass: f64,
}

impl JointGrid {
    pub fn at(&self, i: usize, s: usize) -> f64 {
        self.probabilities[i * self.size + s]
    }
}

fn gaussian(x: f64, var: f64) -> f64 {
    (-0.5 * x * x / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

impl JointDistribution {
    /// Continuous density in `(n_i, n_s)`; the factor 2 is the Jacobian of
    /// `(n_i, n_s) -> (n_+, n_-)`.
    pub fn density(&self, n_i: f64, n_s: f64) -> f64 {
        let sum = n_i + n_s - self.mean_sum;
        let diff = n_i - n_s;
        2.0 * gaussian(sum, self.var_sum) * gaussian(diff, self.var_diff)
    }

    /// Single-beam marginal variance `(var_sum + var_diff)/4`.
    pub fn marginal_variance(&self) -> f64 {
        0.25 * (self.var_sum + self.var_diff)
    }

    pub fn marginal_fano(&self) -> f64 {
        self.marginal_variance() / (0.5 * self.mean_sum)
    }

    /// Lattice probabilities over `±window_sigmas` standard deviations,
    /// renormalized to unit mass. A collapsed difference (`var_diff = 0`)
    /// puts all mass on the diagonal.
    pub fn grid(&self, window_sigmas: f64, max_cells: usize) -> Result<JointGrid> {
        let sd_sum = self.var_sum.sqrt();
        let sd_diff = self.var_diff.max(0.0).sqrt();
        let half = (0.5 * window_sigmas * (sd_sum + sd_diff)).ceil() as i64 + 1;
        let center = (0.5 * self.mean_sum).round() as i64;
        let size = (2 * half + 1) as usize;
        if size.saturating_mul(size) > max_cells {
            return Err(Error::invalid(
                "window_sigmas",
                format!("grid of {size}x{size} exceeds {max_cells} cells"),
            ));
        }
        let start = center - half;
        let mut probabilities = vec![0.0; size * size];
        for i in 0..size {
            for s in 0..size {
                let (ni, ns) = ((start + i as i64) as f64, (start + s as i64) as f64);
                probabilities[i * size + s] = if self.var_diff > 0.0 {
                    self.density(ni, ns)
                } else if i == s {
                    2.0 * gaussian(ni + ns - self.mean_sum, self.var_sum)
                } else {
                    0.0
                };
            }
        }
        let raw_mass: f64 = probabilities.iter().sum();
        if !(raw_mass > 0.0) {
            return Err(Error::invalid(
                "window_sigmas",
                "grid carries no probability",
            ));
        }
        probabilities.iter_mut().for_each(|p| *p /= raw_mass);
        Ok(JointGrid {
            n_i_start: start,
            n_s_start: start,
            size,
            probabilities,
            raw_mass,
        })
    }
}

/// `lambda = 2 + 1/(mu/4 + mu_p - 1)`.
pub fn lambda(params: &TropoParams) -> f64 {
    2.0 + 1.0 / (params.mu / 4.0 + params.mu_p - 1.0)
}

/// Intracavity joint distribution: `n_+` with mean `2N`, variance `lambda N`;
/// `n_-` with variance `N`.
pub fn intracavity_joint(params: &TropoParams, steady: &SteadyState) -> Result<JointDistribution> {
    params.check()?;
    params.require_symmetric("intracavity_joint")?;
    let n = steady.n_signal;
    Ok(JointDistribution {
        mean_sum: 2.0 * n,
        var_sum: lambda(params) * n,
        var_diff: n,
    })
}

/// `delta_tau(omega)`.
pub fn window(omega: f64, tau: f64) -> f64 {
    let x = 0.5 * omega * tau;
    let sinc = if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    tau / (2.0 * std::f64::consts::PI) * sinc * sinc
}

struct Kernels<'a> {
    params: &'a TropoParams,
    steady: &'a SteadyState,
    kind: CountingKernel,
}

impl Kernels<'_> {
    /// `(kappa/(2N) (eps_+²), kappa/(2N) (eps_-²))` at `omega`.
    fn pair(&self, omega: f64) -> (f64, f64) {
        let k = self.params.kappa;
        match self.kind {
            CountingKernel::Simplified => {
                let rate = self.params.mu / 4.0 + self.params.mu_p - 1.0;
                let k2 = k * k;
                let w2 = omega * omega;
                (k2 / (rate * rate * k2 + w2), -k2 / (k2 + w2))
            }
            CountingKernel::Model => {
                let s = spectra::closed_form(self.params, self.steady, omega);
                let c = k / (2.0 * self.steady.n_signal);
                (c * s.eps_plus_sq, c * s.eps_minus_sq)
            }
        }
    }

    fn breaks(&self, tau: f64) -> Vec<f64> {
        let k = self.params.kappa;
        let rate = self.params.mu / 4.0 + self.params.mu_p - 1.0;
        let mut b = vec![rate * k, k, 10.0 * k, 100.0 * k];
        if self.kind == CountingKernel::Model {
            b.push(self.params.kappa_p);
        }
        b.extend([1.0, 10.0, 100.0, 1e3, 1e4].iter().map(|c| c / tau));
        b
    }

    /// `∫ f(omega) delta_tau(omega) d omega` over the real line.
    fn windowed<F: Fn(f64) -> f64>(&self, f: F, tau: f64) -> Result<f64> {
        let tol = Tolerance {
            abs: 1e-14,
            rel: 1e-11,
        };
        let integrand = |w: f64| 2.0 * f(w) * window(w, tau);
        match quadrature::integrate_half_line(
            integrand,
            self.params.kappa,
            &self.breaks(tau),
            tol,
            50_000,
        ) {
            Ok(Estimate { value, .. }) => Ok(value),
            Err(Error::QuadratureNotConverged { value, error })
                if error <= QUADRATURE_ACCEPT * value.abs().max(1.0) =>
            {
                Ok(value)
            }
            Err(e) => Err(e),
        }
    }
}

/// Error estimate, relative to `max(|I|, 1)`, above which a windowed
/// integral `I` is rejected. Every integral enters as `1 + I`.
pub const QUADRATURE_ACCEPT: f64 = 1e-8;

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "tau",
            format!("{tau} must be positive and finite"),
        ))
    }
}

/// Single-beam output Fano factor over a counting window `tau`.
pub fn fano_out(params: &TropoParams, steady: &SteadyState, tau: f64) -> Result<f64> {
    fano_out_with(params, steady, tau, CountingKernel::Simplified)
}

pub fn fano_out_with(
    params: &TropoParams,
    steady: &SteadyState,
    tau: f64,
    kind: CountingKernel,
) -> Result<f64> {
    params.check()?;
    params.require_symmetric("fano_out")?;
    check_tau(tau)?;
    let kernels = Kernels {
        params,
        steady,
        kind,
    };
    let excess = kernels.windowed(
        |w| {
            let (p, m) = kernels.pair(w);
            0.5 * (p + m)
        },
        tau,
    )?;
    Ok(1.0 + excess)
}

/// Joint counting statistics of the signal and idler beams over `tau`.
pub fn joint_out(
    params: &TropoParams,
    steady: &SteadyState,
    tau: f64,
) -> Result<(CountingStats, JointDistribution)> {
    joint_out_with(params, steady, tau, CountingKernel::Simplified)
}

pub fn joint_out_with(
    params: &TropoParams,
    steady: &SteadyState,
    tau: f64,
    kind: CountingKernel,
) -> Result<(CountingStats, JointDistribution)> {
    params.check()?;
    params.require_symmetric("joint_out")?;
    check_tau(tau)?;
    let kernels = Kernels {
        params,
        steady,
        kind,
    };
    let sum = kernels.windowed(|w| kernels.pair(w).0, tau)?;
    let diff = kernels.windowed(|w| kernels.pair(w).1, tau)?;
    let n_out = params.kappa * tau * steady.n_signal;
    let d_plus = 2.0 * n_out * (1.0 + sum);
    let d_minus = (2.0 * n_out * (1.0 + diff)).max(0.0);
    let lam = lambda(params);
    let stats = CountingStats {
        tau,
        n_out,
        d_plus,
        d_minus,
        f_out: (d_plus + d_minus) / (4.0 * n_out),
        f_in: 0.25 * (1.0 + lam),
        lambda: lam,
    };
    let joint = JointDistribution {
        mean_sum: 2.0 * n_out,
        var_sum: d_plus,
        var_diff: d_minus,
    };
    Ok((stats, joint))
}

/// Long-window limits implied by the kernels (`delta_tau -> delta`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongTimeLimits {
    pub f_out: f64,
    pub d_plus_over_2n_out: f64,
    pub d_minus_over_2n_out: f64,
}

pub fn long_time_limits(
    params: &TropoParams,
    steady: &SteadyState,
    kind: CountingKernel,
) -> LongTimeLimits {
    let kernels = Kernels {
        params,
        steady,
        kind,
    };
    let (p, m) = kernels.pair(0.0);
    LongTimeLimits {
        f_out: 1.0 + 0.5 * (p + m),
        d_plus_over_2n_out: 1.0 + p,
        d_minus_over_2n_out: (1.0 + m).max(0.0),
    }
}

/// Area of the window, by quadrature over `omega tau/2 <= 200 pi` plus the
/// asymptotic tail `sin²X/X + (pi/2 - Si(2X))`.
pub fn window_area(tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let pi = std::f64::consts::PI;
    let cut = 200.0 * pi;
    let points: Vec<f64> = (0..=200).map(|k| k as f64 * pi).collect();
    let tol = Tolerance {
        abs: 1e-15,
        rel: 1e-13,
    };
    // In x = omega tau/2, delta_tau d omega = sin²x/(pi x²) dx.
    let body = quadrature::integrate(
        |x: f64| if x == 0.0 { 1.0 } else { (x.sin() / x).powi(2) },
        &points,
        tol,
        10_000,
    )?
    .value;
    let z = 2.0 * cut;
    let si_tail = z.cos() / z * (1.0 - 2.0 / (z * z)) + z.sin() / (z * z) * (1.0 - 6.0 / (z * z));
    let tail = cut.sin().powi(2) / cut + si_tail;
    Ok(2.0 / pi * (body + tail))
}
