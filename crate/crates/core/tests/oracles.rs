//! Independent oracles for the moment, purity and counting calculations.

use tropo_core::covariance::{output_variances_at, squeezing_entanglement};
use tropo_core::glauber::{self, moments, purity, StationaryMoments};
use tropo_core::photon_stats::{self, CountingKernel};
use tropo_core::spectra::{self, closed_form};
use tropo_core::{steady_state, SteadyState, TropoParams};

fn canonical() -> (TropoParams, SteadyState) {
    let p = TropoParams::symmetric(1.0, 100.0, 2.0, 0.1, 0.01);
    (p, steady_state(&p).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// Solves `A S + S A^T + D = 0` for a 2x2 system written out as three scalar
/// equations in `(s00, s01, s11)`, by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn explicit_lyapunov(a: [[f64; 2]; 2], d: [[f64; 2]; 2]) -> [f64; 3] {
    let mut m = [
        [2.0 * a[0][0], 2.0 * a[0][1], 0.0, -d[0][0]],
        [a[1][0], a[0][0] + a[1][1], a[0][1], -d[0][1]],
        [0.0, 2.0 * a[1][0], 2.0 * a[1][1], -d[1][1]],
    ];
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (m[row][3] - tail) / m[row][row];
    }
    x
}

fn as_array(m: &nalgebra::DMatrix<f64>) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

#[test]
fn amplitude_block_solves_the_second_moment_equations() {
    for (mp, mu, kp) in [(2.0, 0.1, 100.0), (1.1, 0.35, 30.0), (6.0, 0.01, 1e4)] {
        let p = TropoParams::symmetric(1.0, kp, mp, mu, 0.01);
        let s = steady_state(&p).unwrap();
        let blocks = spectra::build_blocks(&p, &s).unwrap();
        let sum = &blocks.amplitude_sum;
        let [s00, s01, s11] = explicit_lyapunov(as_array(sum.drift()), as_array(sum.diffusion()));
        let b = glauber::amplitude_block(&p, &s).unwrap();
        assert!(rel(b.var_eps_p, s00) < 1e-12, "{} vs {s00}", b.var_eps_p);
        assert!(rel(b.cov_eps, s01) < 1e-12);
        assert!(rel(b.var_eps_plus, s11) < 1e-12);
    }
}

#[test]
fn phase_recurrence_matches_lyapunov_and_gaussian_structure() {
    let (p, s) = canonical();
    let blocks = spectra::build_blocks(&p, &s).unwrap();
    let sum = &blocks.phase_sum;
    let [s00, s01, s11] = explicit_lyapunov(as_array(sum.drift()), as_array(sum.diffusion()));
    let ph = glauber::phase_moments(&p, &s, 8).unwrap();
    assert!(rel(ph.var_phi_p, s00) < 1e-10);
    assert!(rel(ph.cov_phi, s01) < 1e-10);
    assert!(rel(ph.var_phi_plus, s11) < 1e-10);
    let t = &ph.moment_table;
    let isserlis_22 = s00 * s11 + 2.0 * s01 * s01;
    assert!(rel(t.get(2, 2).unwrap(), isserlis_22) < 1e-10);
    assert!(rel(t.get(0, 8).unwrap(), 105.0 * s11.powi(4)) < 1e-10);
    let expected_minus = (1.0 - p.mu) / (2.0 * p.mu * s.n_signal);
    assert!(rel(ph.var_phi_minus, expected_minus) < 1e-14);
}

#[test]
fn deep_limit_amplitude_moments_approach_the_limit_forms() {
    let p = TropoParams::symmetric(1.0, 1e9, 2.5, 1e-9, 0.01);
    let s = steady_state(&p).unwrap();
    let b = glauber::amplitude_block(&p, &s).unwrap();
    assert!(rel(b.var_eps_plus, b.limit.var_eps_plus) < 1e-8);
    assert!(rel(b.var_eps_p, b.limit.var_eps_p) < 1e-8);
    assert!(rel(b.cov_eps, b.limit.cov_eps) < 1e-8);
    let (lp, lplus, lcov) = glauber::phase_limit_moments(&p, &s);
    let ph = glauber::phase_moments(&p, &s, 2).unwrap();
    assert!(rel(ph.var_phi_p, lp) < 1e-8);
    assert!(rel(ph.var_phi_plus, lplus) < 1e-8);
    assert!(rel(ph.cov_phi, lcov) < 1e-8);
}

/// `E[exp(-Δ²/2K)]` summed from the even moments of `Δ`.
fn series_overlap_1d(delta_moments: &[f64], kernel: f64) -> f64 {
    let mut total = 0.0;
    let mut coeff = 1.0;
    for k in 0..delta_moments.len() / 2 {
        if k > 0 {
            coeff *= -1.0 / (2.0 * kernel * k as f64);
        }
        total += coeff * delta_moments[2 * k];
    }
    total
}

#[test]
fn difference_amplitude_factor_matches_moment_series() {
    let (p, s) = canonical();
    let t = 0.2;
    let p = p.with_transmission(t, t);
    let out = StationaryMoments::intracavity(&p, &s)
        .unwrap()
        .rescaled(p.transmission);
    let delta = moments::formal_series_moments(2.0 * out.var_eps_minus, 40);
    let series = series_overlap_1d(&delta, 4.0 * s.n_signal * t);
    let closed = purity::stationary_purity(&p, &s).unwrap().pi2;
    assert!(rel(series, closed) < 1e-12, "{series} vs {closed}");
    assert!(rel(closed, (1.0 - t / 2.0).powf(-0.5)) < 1e-12);
}

#[test]
fn phase_sum_factor_matches_moment_series() {
    let (p, s) = canonical();
    let t = 0.1;
    let p = p.with_transmission(t, t);
    let blocks = spectra::build_blocks(&p, &s).unwrap();
    let sum = &blocks.phase_sum;
    let order = 16;
    // Differences of two independent draws: doubled diffusion, same drift.
    let delta = moments::stationary_moments(sum.drift(), &(sum.diffusion() * 2.0), order).unwrap();
    let (c1, c2) = (s.n_pump * t, s.n_signal * t / 2.0);
    let mut series = 0.0;
    for a in 0..=order / 2 {
        for b in 0..=(order / 2 - a) {
            let fa: f64 = (1..=a).map(|j| j as f64).product();
            let fb: f64 = (1..=b).map(|j| j as f64).product();
            series += (-c1).powi(a as i32) * (-c2).powi(b as i32) / (fa * fb)
                * delta.get(2 * a, 2 * b).unwrap();
        }
    }
    let closed = purity::stationary_purity(&p, &s).unwrap().pi3;
    assert!(rel(series, closed) < 1e-10, "{series} vs {closed}");
}

#[test]
fn model_kernel_fano_matches_simpson_rule() {
    let (p, s) = canonical();
    let tau = 3.0;
    let c = p.kappa / (4.0 * s.n_signal);
    let f = |w: f64| {
        let sp = closed_form(&p, &s, w);
        2.0 * c * (sp.eps_plus_sq + sp.eps_minus_sq) * photon_stats::window(w, tau)
    };
    let (upper, steps) = (1e3, 1_000_000usize);
    let h = upper / steps as f64;
    let mut acc = f(0.0) + f(upper);
    for j in 1..steps {
        acc += if j % 2 == 1 { 4.0 } else { 2.0 } * f(j as f64 * h);
    }
    let simpson = 1.0 + acc * h / 3.0;
    let adaptive = photon_stats::fano_out_with(&p, &s, tau, CountingKernel::Model).unwrap();
    assert!((simpson - adaptive).abs() < 1e-8, "{simpson} vs {adaptive}");
}

#[test]
fn joint_marginals_reproduce_single_beam_fano() {
    let (p, s) = canonical();
    for kind in [CountingKernel::Simplified, CountingKernel::Model] {
        for tau in [1e-3, 0.5, 7.0, 300.0] {
            let f = photon_stats::fano_out_with(&p, &s, tau, kind).unwrap();
            let (stats, joint) = photon_stats::joint_out_with(&p, &s, tau, kind).unwrap();
            assert!((stats.f_out - f).abs() < 1e-9, "{kind:?} tau={tau}");
            assert!((joint.marginal_fano() - f).abs() < 1e-9);
        }
    }
}

#[test]
fn long_windows_approach_the_kernel_limits() {
    let (p, s) = canonical();
    for kind in [CountingKernel::Simplified, CountingKernel::Model] {
        let lim = photon_stats::long_time_limits(&p, &s, kind);
        let f = photon_stats::fano_out_with(&p, &s, 1e6, kind).unwrap();
        assert!(
            (f - lim.f_out).abs() < 1e-4,
            "{kind:?}: {f} vs {}",
            lim.f_out
        );
    }
}

#[test]
fn simplified_and_model_kernels_agree_in_the_limit() {
    let p = TropoParams::symmetric(1.0, 1e6, 2.0, 1e-4, 0.01);
    let s = steady_state(&p).unwrap();
    for tau in [0.1, 1.0, 10.0] {
        let a = photon_stats::fano_out_with(&p, &s, tau, CountingKernel::Simplified).unwrap();
        let b = photon_stats::fano_out_with(&p, &s, tau, CountingKernel::Model).unwrap();
        assert!((a - b).abs() < 1e-4, "tau={tau}: {a} vs {b}");
    }
}

#[test]
fn limit_squeezing_displays_track_the_full_model() {
    let p = TropoParams::symmetric(1.0, 1e6, 2.0, 1e-4, 0.01);
    let s = steady_state(&p).unwrap();
    for w in [0.0, 0.3, 1.0, 5.0] {
        let full = output_variances_at(&p, &s, w);
        let lim = squeezing_entanglement(&p, w).unwrap();
        assert!(
            (full.x_single() - lim.x_is_variance).abs() < 1e-4,
            "omega={w}"
        );
        assert!((full.y_pp - lim.y_p_variance).abs() < 1e-4);
        assert!((full.x_minus_minus - lim.duan_x_minus).abs() < 1e-12);
        assert!((full.y_plus_plus - lim.duan_y_plus).abs() < 1e-4);
        assert!((full.n_plus() - lim.n_plus).abs() < 1e-4);
        assert!((full.n_pump() - lim.n_pump).abs() < 1e-4);
    }
}
