//! Run configuration: a flat TOML file whose keys carry their units.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use tropo_core::photon_stats::CountingKernel;
use tropo_core::{InjectionMode, TropoParams};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    injection: String,
    kappa_per_second: f64,
    kappa_p_per_second: f64,
    mu_p: f64,
    mu: f64,
    g_per_second: f64,
    #[serde(default = "one")]
    transmission_signal: f64,
    #[serde(default = "one")]
    transmission_pump: f64,

    sweep: String,
    omega_rad_per_second: Option<Vec<f64>>,
    omega_log_range_rad_per_second: Option<[f64; 2]>,
    omega_points: Option<usize>,
    tau_seconds: Option<Vec<f64>>,
    param_name: Option<String>,
    param_values: Option<Vec<f64>>,
    #[serde(default)]
    at_omega_rad_per_second: f64,
    at_tau_seconds: Option<f64>,

    outputs: Vec<String>,
    output_path: PathBuf,
    #[serde(default = "default_format")]
    format: String,
    #[serde(default = "default_kernel")]
    counting_kernel: String,
}

fn one() -> f64 {
    1.0
}

fn default_format() -> String {
    "csv".into()
}

fn default_kernel() -> String {
    "simplified".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Spectra,
    Covariance,
    Purity,
    PartialPurity,
    Squeezing,
    Glauber,
    Counting,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Spectra,
        Quantity::Covariance,
        Quantity::Purity,
        Quantity::PartialPurity,
        Quantity::Squeezing,
        Quantity::Glauber,
        Quantity::Counting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Spectra => "spectra",
            Quantity::Covariance => "covariance",
            Quantity::Purity => "purity",
            Quantity::PartialPurity => "partial_purity",
            Quantity::Squeezing => "squeezing",
            Quantity::Glauber => "glauber",
            Quantity::Counting => "counting",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown output quantity {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" => Ok(Format::JsonLines),
            other => Err(CliError::Config(format!("unknown format {other:?}"))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::JsonLines => "jsonl",
        }
    }
}

/// Parameters that a parameter sweep may vary, by config key.
pub const SWEEPABLE: [&str; 7] = [
    "kappa_per_second",
    "kappa_p_per_second",
    "mu_p",
    "mu",
    "g_per_second",
    "transmission_signal",
    "transmission_pump",
];

pub fn set_param(p: &mut TropoParams, name: &str, value: f64) -> Result<(), CliError> {
    match name {
        "kappa_per_second" => p.kappa = value,
        "kappa_p_per_second" => p.kappa_p = value,
        "mu_p" => p.mu_p = value,
        "mu" => p.mu = value,
        "g_per_second" => p.g = value,
        "transmission_signal" => p.transmission.signal = value,
        "transmission_pump" => p.transmission.pump = value,
        other => {
            return Err(CliError::Config(format!(
                "param_name {other:?} is not one of {SWEEPABLE:?}"
            )))
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    /// Angular frequencies in rad/s.
    Frequency(Vec<f64>),
    /// Counting windows in seconds.
    Tau(Vec<f64>),
    Param {
        name: String,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: TropoParams,
    pub sweep: Sweep,
    pub outputs: Vec<Quantity>,
    pub output_path: PathBuf,
    pub format: Format,
    /// Evaluation frequency when the sweep is not over frequency.
    pub at_omega: f64,
    /// Counting window when the sweep is not over `tau`.
    pub at_tau: Option<f64>,
    pub counting_kernel: CountingKernel,
}

fn increasing(name: &str, v: &[f64]) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(CliError::Config(format!("{name} is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Config(format!("{name} has non-finite entries")));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(format!(
            "{name} is not strictly increasing"
        )));
    }
    Ok(())
}

fn log_range(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(CliError::Config(
            "omega_log_range_rad_per_second needs 0 < min < max".into(),
        ));
    }
    if points < 2 {
        return Err(CliError::Config("omega_points must be at least 2".into()));
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..points)
        .map(|j| 10f64.powf(a + (b - a) * j as f64 / (points - 1) as f64))
        .collect())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        raw.into_config()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }
}

impl RawConfig {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let injection = match self.injection.as_str() {
            "symmetric" => InjectionMode::Symmetric,
            "asymmetric" => InjectionMode::Asymmetric,
            other => return Err(CliError::Config(format!("unknown injection {other:?}"))),
        };
        let params = TropoParams {
            kappa: self.kappa_per_second,
            kappa_p: self.kappa_p_per_second,
            mu_p: self.mu_p,
            mu: self.mu,
            g: self.g_per_second,
            injection,
            transmission: tropo_core::Transmission {
                signal: self.transmission_signal,
                pump: self.transmission_pump,
            },
        };
        let sweep = match self.sweep.as_str() {
            "frequency" => {
                let omegas = match (
                    self.omega_rad_per_second,
                    self.omega_log_range_rad_per_second,
                ) {
                    (Some(list), None) => list,
                    (None, Some([lo, hi])) => {
                        log_range(lo, hi, self.omega_points.unwrap_or(101))?
                    }
                    _ => {
                        return Err(CliError::Config(
                            "frequency sweep needs exactly one of omega_rad_per_second or omega_log_range_rad_per_second".into(),
                        ))
                    }
                };
                increasing("omega_rad_per_second", &omegas)?;
                Sweep::Frequency(omegas)
            }
            "tau" => {
                let taus = self
                    .tau_seconds
                    .ok_or_else(|| CliError::Config("tau sweep needs tau_seconds".into()))?;
                increasing("tau_seconds", &taus)?;
                Sweep::Tau(taus)
            }
            "param" => {
                let name = self
                    .param_name
                    .ok_or_else(|| CliError::Config("param sweep needs param_name".into()))?;
                let values = self
                    .param_values
                    .ok_or_else(|| CliError::Config("param sweep needs param_values".into()))?;
                set_param(&mut params.clone(), &name, 1.0)?;
                increasing("param_values", &values)?;
                Sweep::Param { name, values }
            }
            other => return Err(CliError::Config(format!("unknown sweep {other:?}"))),
        };
        if self.outputs.is_empty() {
            return Err(CliError::Config("outputs is empty".into()));
        }
        let mut outputs = Vec::new();
        for name in &self.outputs {
            let q = Quantity::parse(name)?;
            if !outputs.contains(&q) {
                outputs.push(q);
            }
        }
        if outputs.contains(&Quantity::Counting)
            && !matches!(sweep, Sweep::Tau(_))
            && self.at_tau_seconds.is_none()
        {
            return Err(CliError::Config(
                "counting output needs a tau sweep or at_tau_seconds".into(),
            ));
        }
        let counting_kernel = match self.counting_kernel.as_str() {
            "simplified" => CountingKernel::Simplified,
            "model" => CountingKernel::Model,
            other => {
                return Err(CliError::Config(format!(
                    "unknown counting_kernel {other:?}"
                )))
            }
        };
        Ok(RunConfig {
            params,
            sweep,
            outputs,
            output_path: self.output_path,
            format: Format::parse(&self.format)?,
            at_omega: self.at_omega_rad_per_second,
            at_tau: self.at_tau_seconds,
            counting_kernel,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
injection = "symmetric"
kappa_per_second = 1.0
kappa_p_per_second = 100.0
mu_p = 2.0
mu = 0.1
g_per_second = 0.01
output_path = "out"
outputs = ["purity", "spectra"]
"#;

    fn with(extra: &str) -> Result<RunConfig, CliError> {
        RunConfig::from_toml(&format!("{BASE}{extra}"))
    }

    #[test]
    fn frequency_list_and_log_range() {
        let c = with("sweep = \"frequency\"\nomega_rad_per_second = [0.0, 1.0]\n").unwrap();
        assert_eq!(c.sweep, Sweep::Frequency(vec![0.0, 1.0]));
        assert_eq!(c.format, Format::Csv);
        let c = with(
            "sweep = \"frequency\"\nomega_log_range_rad_per_second = [0.01, 100.0]\nomega_points = 5\n",
        )
        .unwrap();
        match c.sweep {
            Sweep::Frequency(v) => {
                assert_eq!(v.len(), 5);
                assert!((v[2] - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_or_unordered_sweeps_are_config_errors() {
        for extra in [
            "sweep = \"frequency\"\nomega_rad_per_second = []\n",
            "sweep = \"frequency\"\nomega_rad_per_second = [1.0, 1.0]\n",
            "sweep = \"tau\"\ntau_seconds = [2.0, 1.0]\n",
            "sweep = \"param\"\nparam_name = \"nope\"\nparam_values = [1.0]\n",
            "sweep = \"sideways\"\n",
        ] {
            assert!(matches!(with(extra), Err(CliError::Config(_))), "{extra}");
        }
    }

    #[test]
    fn unknown_keys_and_quantities_are_rejected() {
        assert!(with("sweep = \"tau\"\ntau_seconds = [1.0]\nkappa = 3.0\n").is_err());
        let text = BASE.replace("\"spectra\"", "\"colour\"");
        assert!(
            RunConfig::from_toml(&format!("{text}sweep = \"tau\"\ntau_seconds = [1.0]\n")).is_err()
        );
    }

    #[test]
    fn counting_needs_a_window() {
        let text = BASE.replace("\"spectra\"", "\"counting\"");
        let r = RunConfig::from_toml(&format!(
            "{text}sweep = \"frequency\"\nomega_rad_per_second = [0.0]\n"
        ));
        assert!(matches!(r, Err(CliError::Config(_))));
    }
}
