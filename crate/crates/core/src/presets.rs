//! Parameter sets and frequency grids for the purity figures.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::TropoParams;

/// Frequency grid points per figure curve.
pub const FIGURE_POINTS: usize = 801;
/// Half-width of the figure frequency range in units of `kappa`.
pub const FIGURE_HALF_WIDTH: f64 = 10.0;
/// Pump damping of the figure presets in units of `kappa`.
pub const FIGURE_KAPPA_P: f64 = 100.0;
pub const FIGURE_G: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    /// Symmetric injection, `mu = 0.1`, total purity.
    Fig1a,
    /// Symmetric injection, `mu = 0.35`, total purity.
    Fig1b,
    /// Partial signal-idler purity with the parameters of `Fig1a`.
    Fig2,
    /// Asymmetric injection, `mu = 0.1`.
    Fig3a,
    /// Asymmetric injection, `mu = 0.01`.
    Fig3b,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Fig1a,
        Figure::Fig1b,
        Figure::Fig2,
        Figure::Fig3a,
        Figure::Fig3b,
    ];

    pub fn mu(self) -> f64 {
        match self {
            Figure::Fig1a | Figure::Fig2 | Figure::Fig3a => 0.1,
            Figure::Fig1b => 0.35,
            Figure::Fig3b => 0.01,
        }
    }

    pub fn pump_levels(self) -> &'static [f64] {
        match self {
            Figure::Fig1a | Figure::Fig1b | Figure::Fig2 => &[1.1, 2.0, 4.2],
            Figure::Fig3a | Figure::Fig3b => &[1.5, 2.0, 4.0, 6.0],
        }
    }

    /// Whether the figure shows the signal-idler partial purity.
    pub fn is_partial(self) -> bool {
        self == Figure::Fig2
    }

    /// One parameter set per curve, with `kappa = 1`.
    pub fn curves(self) -> Vec<TropoParams> {
        let mu = self.mu();
        self.pump_levels()
            .iter()
            .map(|&mp| match self {
                Figure::Fig3a | Figure::Fig3b => {
                    TropoParams::asymmetric(1.0, FIGURE_KAPPA_P, mp, mu, FIGURE_G)
                }
                _ => TropoParams::symmetric(1.0, FIGURE_KAPPA_P, mp, mu, FIGURE_G),
            })
            .collect()
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig1a => "1a",
            Figure::Fig1b => "1b",
            Figure::Fig2 => "2",
            Figure::Fig3a => "3a",
            Figure::Fig3b => "3b",
        })
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| Error::invalid("figure", format!("unknown figure {s:?}")))
    }
}

/// `points` frequencies on `[-half_width, half_width]`, denser near zero:
/// `omega_j = half_width sinh(s t_j)/sinh(s)` with `t_j` uniform on `[-1, 1]`.
/// An odd `points` puts `omega = 0` exactly in the middle.
pub fn sinh_grid(half_width: f64, points: usize, sharpness: f64) -> Vec<f64> {
    assert!(points >= 2);
    let last = (points - 1) as f64;
    (0..points)
        .map(|j| {
            let t = 2.0 * j as f64 / last - 1.0;
            if 2 * j + 1 == points {
                0.0
            } else {
                half_width * (sharpness * t).sinh() / sharpness.sinh()
            }
        })
        .collect()
}

/// The figure frequency grid in units of `kappa`.
pub fn figure_grid() -> Vec<f64> {
    sinh_grid(FIGURE_HALF_WIDTH, FIGURE_POINTS, 3.0)
}
