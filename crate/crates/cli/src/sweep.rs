//! Sweep expansion and per-point evaluation of the requested quantities.

use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use tropo_core::covariance::{self, CovarianceMatrix6};
use tropo_core::glauber::{self, purity};
use tropo_core::photon_stats::{self, CountingKernel};
use tropo_core::spectra::{self, SpectralSet};
use tropo_core::{steady_state, validate, SteadyState, TropoParams};

use crate::config::{set_param, Quantity, RunConfig, Sweep};
use crate::error::CliError;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub params: TropoParams,
    /// Angular frequency in rad/s.
    pub omega: f64,
    /// Counting window in seconds.
    pub tau: Option<f64>,
}

pub fn expand(cfg: &RunConfig) -> Result<Vec<SweepPoint>, CliError> {
    let point = |index, params, omega, tau| SweepPoint {
        index,
        params,
        omega,
        tau,
    };
    Ok(match &cfg.sweep {
        Sweep::Frequency(ws) => ws
            .iter()
            .enumerate()
            .map(|(i, &w)| point(i, cfg.params, w, cfg.at_tau))
            .collect(),
        Sweep::Tau(ts) => ts
            .iter()
            .enumerate()
            .map(|(i, &t)| point(i, cfg.params, cfg.at_omega, Some(t)))
            .collect(),
        Sweep::Param { name, values } => {
            let mut out = Vec::with_capacity(values.len());
            for (i, &v) in values.iter().enumerate() {
                let mut p = cfg.params;
                set_param(&mut p, name, v)?;
                out.push(point(i, p, cfg.at_omega, cfg.at_tau));
            }
            out
        }
    })
}

const PREFIX: [&str; 4] = ["index", "mu_p", "mu", "kappa_p_over_kappa"];

const COVARIANCE_COLUMNS: [&str; 21] = [
    "c_xp_xp", "c_xp_xi", "c_xp_xs", "c_xp_yp", "c_xp_yi", "c_xp_ys", "c_xi_xi", "c_xi_xs",
    "c_xi_yp", "c_xi_yi", "c_xi_ys", "c_xs_xs", "c_xs_yp", "c_xs_yi", "c_xs_ys", "c_yp_yp",
    "c_yp_yi", "c_yp_ys", "c_yi_yi", "c_yi_ys", "c_ys_ys",
];

/// Columns after the common prefix, per quantity.
pub fn columns(q: Quantity) -> Vec<&'static str> {
    let specific: Vec<&'static str> = match q {
        Quantity::Spectra => std::iter::once("omega_over_kappa")
            .chain(SpectralSet::FIELD_NAMES)
            .collect(),
        Quantity::Covariance => std::iter::once("omega_over_kappa")
            .chain(COVARIANCE_COLUMNS)
            .collect(),
        Quantity::Purity => vec!["omega_over_kappa", "purity", "n_minus", "d_x", "d_y"],
        Quantity::PartialPurity => vec!["omega_over_kappa", "partial_purity", "purity"],
        Quantity::Squeezing => vec![
            "omega_over_kappa",
            "x_is",
            "y_p",
            "duan_x_minus",
            "duan_y_plus",
            "duan_satisfied",
            "n_plus",
            "n_pump",
        ],
        Quantity::Glauber => vec![
            "pi1",
            "pi2",
            "pi3",
            "pi4",
            "pi_st",
            "nu",
            "pi_intracavity",
            "var_eps_plus",
            "var_eps_p",
            "cov_eps",
            "var_eps_minus",
            "var_phi_p",
            "var_phi_plus",
            "cov_phi",
            "var_phi_minus",
            "fano_is",
            "fano_p",
        ],
        Quantity::Counting => vec![
            "kappa_tau",
            "n_out",
            "f_out",
            "d_plus",
            "d_minus",
            "f_in",
            "lambda",
        ],
    };
    PREFIX.into_iter().chain(specific).collect()
}

fn covariance_cells(c: &CovarianceMatrix6) -> impl Iterator<Item = Cell> + '_ {
    (0..6).flat_map(move |r| (r..6).map(move |k| Cell::Float(c.m[(r, k)])))
}

struct Evaluator<'a> {
    p: &'a TropoParams,
    s: SteadyState,
    omega: f64,
    tau: Option<f64>,
    kernel: CountingKernel,
}

impl Evaluator<'_> {
    fn row(&self, q: Quantity, index: usize) -> tropo_core::Result<Vec<Cell>> {
        let (p, s) = (self.p, &self.s);
        let w_norm = Cell::Float(self.omega / p.kappa);
        let mut row: Vec<Cell> = vec![
            index.into(),
            p.mu_p.into(),
            p.mu.into(),
            (p.kappa_p / p.kappa).into(),
        ];
        match q {
            Quantity::Spectra => {
                // Building the blocks runs the stability check.
                spectra::build_blocks(p, s)?;
                row.push(w_norm);
                row.extend(
                    spectra::closed_form(p, s, self.omega)
                        .values()
                        .map(Cell::Float),
                );
            }
            Quantity::Covariance => {
                let c =
                    covariance::covariance6(&covariance::output_variances_at(p, s, self.omega))?;
                row.push(w_norm);
                row.extend(covariance_cells(&c));
            }
            Quantity::Purity => {
                let r = covariance::purity_at(p, s, self.omega)?;
                row.extend([
                    w_norm,
                    r.purity_total.into(),
                    r.factor_n_minus.into(),
                    r.factor_dx.into(),
                    r.factor_dy.into(),
                ]);
            }
            Quantity::PartialPurity => {
                let r = covariance::purity_at(p, s, self.omega)?;
                row.extend([w_norm, r.purity_partial_is.into(), r.purity_total.into()]);
            }
            Quantity::Squeezing => {
                let r = covariance::squeezing_entanglement(p, self.omega)?;
                row.extend([
                    w_norm,
                    r.x_is_variance.into(),
                    r.y_p_variance.into(),
                    r.duan_x_minus.into(),
                    r.duan_y_plus.into(),
                    r.duan_satisfied.into(),
                    r.n_plus.into(),
                    r.n_pump.into(),
                ]);
            }
            Quantity::Glauber => {
                let pur = purity::stationary_purity(p, s)?;
                let m = glauber::output_pfunction_rescale(p, s)?;
                let (f_is, f_p) = glauber::fano_intracavity(p)?;
                row.extend(
                    [
                        pur.pi1,
                        pur.pi2,
                        pur.pi3,
                        pur.pi4,
                        pur.pi_st,
                        pur.nu,
                        pur.pi_intracavity,
                        m.amplitude.var_eps_plus,
                        m.amplitude.var_eps_p,
                        m.amplitude.cov_eps,
                        m.var_eps_minus,
                        m.var_phi_p,
                        m.var_phi_plus,
                        m.cov_phi,
                        m.var_phi_minus,
                        f_is,
                        f_p,
                    ]
                    .map(Cell::Float),
                );
            }
            Quantity::Counting => {
                let tau = self.tau.expect("validated: counting has a window");
                let (c, _) = photon_stats::joint_out_with(p, s, tau, self.kernel)?;
                row.extend(
                    [
                        p.kappa * tau,
                        c.n_out,
                        c.f_out,
                        c.d_plus,
                        c.d_minus,
                        c.f_in,
                        c.lambda,
                    ]
                    .map(Cell::Float),
                );
            }
        }
        Ok(row)
    }
}

struct PointOutput {
    rows: Vec<Vec<Cell>>,
    warnings: Vec<String>,
}

fn evaluate(cfg: &RunConfig, pt: &SweepPoint) -> Result<PointOutput, CliError> {
    let model = |source| CliError::Model {
        index: pt.index,
        source,
    };
    let warnings = validate(&pt.params)
        .map_err(model)?
        .iter()
        .map(|w| format!("index={} warning={} detail={w}", pt.index, w.name()))
        .collect();
    let ev = Evaluator {
        p: &pt.params,
        s: steady_state(&pt.params).map_err(model)?,
        omega: pt.omega,
        tau: pt.tau,
        kernel: cfg.counting_kernel,
    };
    let rows = cfg
        .outputs
        .iter()
        .map(|&q| ev.row(q, pt.index).map_err(model))
        .collect::<Result<_, _>>()?;
    Ok(PointOutput { rows, warnings })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub points: usize,
    pub warnings: usize,
}

/// Evaluates every sweep point in parallel and writes one file per quantity
/// plus `warnings.log` into `output_path`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let points = expand(cfg)?;
    let results: Vec<Result<PointOutput, CliError>> =
        points.par_iter().map(|pt| evaluate(cfg, pt)).collect();
    let mut tables: Vec<Table> = cfg
        .outputs
        .iter()
        .map(|&q| Table::new(columns(q)))
        .collect();
    let mut warnings = Vec::new();
    for r in results {
        let out = r?;
        for (table, row) in tables.iter_mut().zip(out.rows) {
            table.push(row);
        }
        warnings.extend(out.warnings);
    }
    let dir = &cfg.output_path;
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut files = Vec::new();
    for (q, table) in cfg.outputs.iter().zip(&tables) {
        let path = dir.join(format!("{}.{}", q.name(), cfg.format.extension()));
        table.write(&path, cfg.format)?;
        files.push(path);
    }
    let log = dir.join("warnings.log");
    let text: String = warnings.iter().map(|w| format!("{w}\n")).collect();
    fs::write(&log, text).map_err(|source| CliError::Io {
        path: log.clone(),
        source,
    })?;
    files.push(log);
    Ok(RunSummary {
        files,
        points: points.len(),
        warnings: warnings.len(),
    })
}
