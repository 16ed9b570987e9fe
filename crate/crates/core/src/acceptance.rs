//! Executable acceptance criteria, shared by the test suite and `tropo selftest`.
//!
//! Each criterion returns a [`CriterionReport`]; numerical errors raised while
//! evaluating a criterion turn it red rather than aborting the run.

use std::fmt;

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covariance::{self, excess_noise_limit, squeezing_entanglement};
use crate::error::Result;
use crate::glauber::{self, moments, purity};
use crate::model::{steady_state, InjectionMode, SteadyState, TropoParams};
use crate::photon_stats;
use crate::presets::{figure_grid, Figure};
use crate::spectra::{self, SpectralSet};

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "C{:02} {verdict} {}: {}",
            self.id, self.title, self.detail
        )
    }
}

fn report(id: u8, title: &'static str, outcome: Result<(bool, String)>) -> CriterionReport {
    let (passed, detail) =
        outcome.unwrap_or_else(|e| (false, format!("error kind={} {e}", e.kind())));
    CriterionReport {
        id,
        title,
        passed,
        detail,
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Seed of the random parameter sample.
pub const SAMPLE_SEED: u64 = 0x7f0e_2d1c;
pub const SAMPLE_SETS: usize = 200;
pub const SAMPLE_FREQUENCIES: usize = 25;
/// Relative tolerance of the closed-form versus resolvent comparison.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

/// Random valid parameter sets for one injection mode.
///
/// `kappa` uniform in `[0.2, 5]`; `kappa_p/kappa`, `mu` and `g/kappa`
/// log-uniform in `[1, 1000]`, `[1e-3, 0.9]` and `[1e-3, 0.1]`; `mu_p`
/// uniform in `[1.01, 10]`.
pub fn sample_parameters(
    mode: InjectionMode,
    seed: u64,
    count: usize,
) -> Result<Vec<(TropoParams, SteadyState)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log_uniform = |lo: f64, hi: f64| (rng.gen_range(lo.ln()..hi.ln())).exp();
    let mut draws = Vec::with_capacity(count);
    for _ in 0..count {
        let ratio = log_uniform(1.0, 1000.0);
        let mu = log_uniform(1e-3, 0.9);
        let g = log_uniform(1e-3, 0.1);
        draws.push((ratio, mu, g));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5555);
    draws
        .into_iter()
        .map(|(ratio, mu, g)| {
            let kappa = rng.gen_range(0.2..5.0);
            let mu_p = rng.gen_range(1.01..10.0);
            let p = TropoParams {
                injection: mode,
                ..TropoParams::symmetric(kappa, ratio * kappa, mu_p, mu, g * kappa)
            };
            Ok((p, steady_state(&p)?))
        })
        .collect()
}

/// `SAMPLE_FREQUENCIES` log-spaced frequencies in `[1e-2, 1e3] kappa`.
pub fn sample_frequencies(kappa: f64) -> Vec<f64> {
    let n = SAMPLE_FREQUENCIES;
    (0..n)
        .map(|j| kappa * 10f64.powf(-2.0 + 5.0 * j as f64 / (n - 1) as f64))
        .collect()
}

fn both_samples() -> Result<Vec<(TropoParams, SteadyState)>> {
    let mut all = sample_parameters(InjectionMode::Symmetric, SAMPLE_SEED, SAMPLE_SETS)?;
    all.extend(sample_parameters(
        InjectionMode::Asymmetric,
        SAMPLE_SEED,
        SAMPLE_SETS,
    )?);
    Ok(all)
}

fn field_errors(closed: &SpectralSet, oracle: &SpectralSet) -> [f64; 8] {
    let (c, o) = (closed.values(), oracle.values());
    std::array::from_fn(|k| rel_diff(c[k], o[k]))
}

fn oracle_equivalence() -> Result<(bool, String)> {
    let sample = both_samples()?;
    let mut worst = 0.0f64;
    let mut worst_field = "";
    let mut mismatches = 0usize;
    let mut comparisons = 0usize;
    for (p, s) in &sample {
        let blocks = spectra::build_blocks(p, s)?;
        for w in sample_frequencies(p.kappa) {
            let oracle = spectra::oracle_set(&blocks, w)?;
            let errs = field_errors(&spectra::closed_form(p, s, w), &oracle);
            for (k, e) in errs.iter().enumerate() {
                comparisons += 1;
                if *e > ORACLE_TOLERANCE {
                    mismatches += 1;
                }
                if *e > worst {
                    worst = *e;
                    worst_field = SpectralSet::FIELD_NAMES[k];
                }
            }
        }
    }
    let detected = mutation_detections(&sample)?;
    let passed = mismatches == 0 && detected == 16;
    Ok((
        passed,
        format!(
            "{comparisons} comparisons, {mismatches} above {ORACLE_TOLERANCE:e}, \
             worst {worst:.2e} ({worst_field}); coefficient perturbations of 1e-6 detected {detected}/16"
        ),
    ))
}

/// Scales each closed-form density by `1 + 1e-6` in turn and counts how many
/// of the perturbations the oracle comparison flags, for one set per mode.
fn mutation_detections(sample: &[(TropoParams, SteadyState)]) -> Result<usize> {
    let firsts = [
        sample.iter().find(|(p, _)| p.is_symmetric()),
        sample.iter().find(|(p, _)| !p.is_symmetric()),
    ];
    let mut detected = 0;
    for (p, s) in firsts.into_iter().flatten() {
        let blocks = spectra::build_blocks(p, s)?;
        let oracles = sample_frequencies(p.kappa)
            .into_iter()
            .map(|w| spectra::oracle_set(&blocks, w))
            .collect::<Result<Vec<_>>>()?;
        for k in 0..8 {
            let mut scale = [1.0; 8];
            scale[k] += 1e-6;
            let flagged = oracles.iter().any(|o| {
                let c = spectra::closed_form_with_coefficient_scale(p, s, o.omega, scale);
                field_errors(&c, o)[k] > ORACLE_TOLERANCE
            });
            detected += usize::from(flagged);
        }
    }
    Ok(detected)
}

fn minimum_uncertainty() -> Result<(bool, String)> {
    let sample = sample_parameters(InjectionMode::Symmetric, SAMPLE_SEED, SAMPLE_SETS)?;
    let mut worst = 0.0f64;
    let mut worst_split = 0.0f64;
    for (p, s) in &sample {
        for w in sample_frequencies(p.kappa) {
            let spec = spectra::closed_form(p, s, w);
            let v = covariance::output_variances(p, s, &spec);
            worst = worst.max((v.n_minus() - 1.0).abs());
            let x = 1.0 + p.kappa / (2.0 * s.n_signal) * spec.eps_minus_sq;
            let y = 1.0 + 2.0 * p.kappa * s.n_signal * spec.phi_minus_sq;
            worst_split = worst_split
                .max((x - v.x_minus_minus).abs() / v.x_minus_minus.max(1.0))
                .max(rel_diff(y, v.y_minus_minus));
        }
    }
    Ok((
        worst <= 1e-12 && worst_split <= 1e-10,
        format!(
            "max |N_- - 1| = {worst:.2e} over {} points; difference-mode variances agree with the spectra to {worst_split:.1e}",
            sample.len() * SAMPLE_FREQUENCIES
        ),
    ))
}

fn purity_limits() -> Result<(bool, String)> {
    let mut lowest = f64::INFINITY;
    for (p, s) in both_samples()? {
        let r = covariance::purity_at(&p, &s, 1e3 * p.kappa)?;
        lowest = lowest.min(r.purity_total);
    }
    let p = TropoParams::asymmetric(1.0, 100.0, 6.0, 0.01, 0.01);
    let at_zero = covariance::purity_at(&p, &steady_state(&p)?, 0.0)?.purity_total;
    Ok((
        lowest >= 0.999 && (at_zero - 0.5).abs() <= 0.02,
        format!("min purity at 1e3 kappa = {lowest:.6}; asymmetric Pi(0) = {at_zero:.4}"),
    ))
}

fn squeezing_golden() -> Result<(bool, String)> {
    let p = TropoParams::symmetric(1.0, 100.0, 2.0, 0.1, 0.01);
    let y = squeezing_entanglement(&p, 0.0)?.y_p_variance;
    let strong = TropoParams::symmetric(1.0, 1e5, 200.0, 0.01, 0.01);
    let x = squeezing_entanglement(&strong, 0.0)?.x_is_variance;
    Ok((
        (y - 0.5).abs() <= 1e-12 && (x - 0.5).abs() <= 0.005,
        format!("4<dY_p^2>(mu_p=2) = {y}; 4<dX_is^2>(mu_p=200) = {x:.5}"),
    ))
}

fn excess_noise() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for mp in [1.5, 2.0, 4.0] {
        let p = TropoParams::symmetric(1.0, 1e6, mp, 1e-4, 0.01);
        let v = covariance::output_variances_at(&p, &steady_state(&p)?, 0.0);
        let target = excess_noise_limit(mp);
        let (ep, epump) = (rel_diff(v.n_plus(), target), rel_diff(v.n_pump(), target));
        worst = worst.max(ep).max(epump);
        parts.push(format!("mu_p={mp}: N_+ {ep:.2e}, N_p {epump:.2e}"));
    }
    Ok((
        worst <= 1e-6,
        format!("relative deviations at mu=1e-4: {}", parts.join("; ")),
    ))
}

fn partial_purity_dominance() -> Result<(bool, String)> {
    let mut violations = 0usize;
    let mut worst_det = 0.0f64;
    let mut points = 0usize;
    for p in Figure::Fig1a.curves() {
        let s = steady_state(&p)?;
        for w in figure_grid() {
            let v = covariance::output_variances_at(&p, &s, w * p.kappa);
            let cov = covariance::covariance6(&v)?;
            let r = covariance::spectral_purity(&cov)?;
            points += 1;
            if r.purity_partial_is < r.purity_total {
                violations += 1;
            }
            let b = cov.to_sum_difference_basis();
            let diff = Matrix2::new(b[(2, 2)], b[(2, 5)], b[(5, 2)], b[(5, 5)]);
            worst_det = worst_det.max((diff.determinant() - 1.0).abs());
        }
    }
    Ok((
        violations == 0 && worst_det <= 1e-12,
        format!(
            "{violations}/{points} points with partial < total; max |det - 1| = {worst_det:.2e}"
        ),
    ))
}

/// Parameters deep in the strong pump-damping, small-injection limit.
pub fn deep_limit_parameters() -> TropoParams {
    TropoParams::symmetric(1.0, 1e12, 2.0, 1e-12, 0.01)
}

fn glauber_moments() -> Result<(bool, String)> {
    let p = deep_limit_parameters();
    let s = steady_state(&p)?;
    let block = glauber::phase_moments(&p, &s, glauber::DEFAULT_PHASE_ORDER)?;
    let (lp, lplus, lcov) = glauber::phase_limit_moments(&p, &s);
    let phase_err = rel_diff(block.var_phi_p, lp)
        .max(rel_diff(block.var_phi_plus, lplus))
        .max(rel_diff(block.cov_phi, lcov));

    let c = TropoParams::symmetric(1.0, 100.0, 2.0, 0.1, 0.01);
    let cs = steady_state(&c)?;
    let m = glauber::difference_amplitude_moments(&cs, 8);
    let series_err = (1..=4)
        .map(|k| {
            let expected = moments::double_factorial_odd(k) * (-cs.n_signal).powi(k as i32);
            rel_diff(m[2 * k], expected)
        })
        .fold(0.0, f64::max);
    let (f_is, f_p) = glauber::fano_intracavity(&c)?;
    Ok((
        phase_err <= 1e-10 && series_err <= 1e-12 && f_p == 1.0 && f_is == 1.0,
        format!(
            "phase moments vs limit forms {phase_err:.2e}; <eps_-^2k> {series_err:.1e}; F_p = {f_p}, F_is(mu_p=2) = {f_is}"
        ),
    ))
}

fn stationary_purity() -> Result<(bool, String)> {
    let mu = 0.1;
    let t = 1e-4 * mu;
    let p = TropoParams::symmetric(1.0, 100.0, 2.0, mu, 0.01).with_transmission(t, t);
    let s = steady_state(&p)?;
    let r = purity::stationary_purity(&p, &s)?;
    let (q1, q4) = purity::quadrature_pi1_pi4(&p, &s, 64)?;
    let quad_err = rel_diff(q1, r.pi1).max(rel_diff(q4, r.pi4));
    let intra = purity::intracavity_factors(&p, &s)?[3];
    let intra_err = rel_diff(intra, mu.sqrt());
    Ok((
        (r.pi_st - 1.0).abs() <= 1e-6 && quad_err <= 1e-6 && intra_err <= 1e-12,
        format!(
            "Pi_st(T=1e-4 mu) - 1 = {:.2e}; quadrature vs closed form {quad_err:.1e}; intracavity phase factor vs sqrt(mu) {intra_err:.1e}",
            r.pi_st - 1.0
        ),
    ))
}

fn counting_statistics() -> Result<(bool, String)> {
    let p = TropoParams::symmetric(1.0, 100.0, 2.0, 0.1, 0.01);
    let s = steady_state(&p)?;
    let short = photon_stats::fano_out(&p, &s, 1e-4)?;
    let long = photon_stats::fano_out(&p, &s, 1e4)?;
    let long_target = 0.5 * p.mu_p / (p.mu / 2.0 + p.mu_p - 1.0);
    let near = TropoParams::symmetric(1.0, 100.0, 1.01, 0.1, 0.01);
    let near_long = photon_stats::fano_out(&near, &steady_state(&near)?, 1e4)?;
    let (stats, _) = photon_stats::joint_out(&p, &s, 1e4)?;
    let collapse = stats.d_minus / (2.0 * stats.n_out);
    let clauses = [
        (short - 1.0).abs() <= 1e-6,
        (long - long_target).abs() <= 1e-4,
        (near_long * p.mu - 1.0).abs() <= 0.05,
        collapse < 1e-3,
    ];
    Ok((
        clauses.iter().all(|c| *c),
        format!(
            "F(1e-4) - 1 = {:.2e}; F(1e4) = {long:.5} vs {long_target:.5}; \
             F(1e4, mu_p=1.01) = {near_long:.2} vs 1/mu = {}; d_-/2N_out = {collapse:.2e}; clauses {clauses:?}",
            short - 1.0,
            1.0 / p.mu
        ),
    ))
}

fn curve_purity(p: &TropoParams, omegas: &[f64], partial: bool) -> Result<Vec<f64>> {
    let s = steady_state(p)?;
    omegas
        .iter()
        .map(|w| {
            covariance::purity_at(p, &s, w * p.kappa).map(|r| {
                if partial {
                    r.purity_partial_is
                } else {
                    r.purity_total
                }
            })
        })
        .collect()
}

/// Half-width at half-maximum of the impurity `1 - Pi(omega)`, in units of
/// `kappa`, located by scanning upward from zero and bisecting.
pub fn impurity_half_width(p: &TropoParams) -> Result<f64> {
    let s = steady_state(p)?;
    let impurity = |w: f64| -> Result<f64> {
        Ok(1.0 - covariance::purity_at(p, &s, w * p.kappa)?.purity_total)
    };
    let half = 0.5 * impurity(0.0)?;
    let mut lo = 0.0;
    let mut hi = 1e-4;
    while impurity(hi)? > half {
        lo = hi;
        hi *= 1.5;
        if hi > 1e6 {
            return Ok(f64::INFINITY);
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if impurity(mid)? > half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn figure_reproduction() -> Result<(bool, String)> {
    let grid = figure_grid();
    let centre = grid.len() / 2;
    let fig1a = Figure::Fig1a.curves();
    let near = curve_purity(&fig1a[0], &grid, false)?;
    let far = curve_purity(&fig1a[2], &grid, false)?;
    let argmin = |v: &[f64]| {
        v.iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0)
    };
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let clause_1a = argmin(&near) == centre && min(&near) < min(&far);

    let mut clause_1b = true;
    let mut pairs = Vec::new();
    for (a, b) in fig1a.iter().zip(Figure::Fig1b.curves()) {
        let pa = curve_purity(a, &[0.0], false)?[0];
        let pb = curve_purity(&b, &[0.0], false)?[0];
        clause_1b &= pb > pa;
        pairs.push(format!("mu_p={}: {pb:.5} vs {pa:.5}", a.mu_p));
    }

    let mut clause_3b = true;
    let mut widths = Vec::new();
    for (a, b) in Figure::Fig3a.curves().iter().zip(Figure::Fig3b.curves()) {
        if a.mu_p <= 2.0 {
            continue;
        }
        let (wa, wb) = (impurity_half_width(a)?, impurity_half_width(&b)?);
        clause_3b &= wb < wa;
        widths.push(format!("mu_p={}: {wb:.4} vs {wa:.4}", a.mu_p));
    }
    Ok((
        clause_1a && clause_1b && clause_3b,
        format!(
            "1a: min at omega=0 {} and {:.4} < {:.4} [{clause_1a}]; 1b Pi(0) mu=0.35 vs 0.1: {} [{clause_1b}]; \
             3b half-widths mu=0.01 vs 0.1: {} [{clause_3b}]",
            argmin(&near) == centre,
            min(&near),
            min(&far),
            pairs.join(", "),
            widths.join(", ")
        ),
    ))
}

/// Identifiers of the criteria evaluated by this module.
pub const CRITERIA: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

/// Runs one criterion; `None` for an unknown identifier.
pub fn run(id: u8) -> Option<CriterionReport> {
    let r = match id {
        1 => report(1, "oracle equivalence", oracle_equivalence()),
        2 => report(2, "minimum-uncertainty twin beams", minimum_uncertainty()),
        3 => report(3, "purity limits", purity_limits()),
        4 => report(4, "squeezing golden values", squeezing_golden()),
        5 => report(5, "near-threshold excess noise", excess_noise()),
        6 => report(6, "partial purity dominance", partial_purity_dominance()),
        7 => report(7, "Glauber moments", glauber_moments()),
        8 => report(8, "stationary purity", stationary_purity()),
        9 => report(9, "counting statistics", counting_statistics()),
        10 => report(10, "figure reproduction", figure_reproduction()),
        _ => return None,
    };
    Some(r)
}

pub fn run_all() -> Vec<CriterionReport> {
    CRITERIA.iter().filter_map(|&id| run(id)).collect()
}
