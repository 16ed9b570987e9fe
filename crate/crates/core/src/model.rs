//! Parameters, regime checks and the classical steady state.

use std::fmt;

use crate::error::{Error, Result};

/// Which cavity mode receives the injected seed.
///
/// `Symmetric` seeds signal and idler equally with equal damping rates.
/// `Asymmetric` seeds only the idler; the signal damping rate is then derived
/// as `kappa_s = kappa_i * (1 - mu)` so that both modes keep equal photon numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InjectionMode {
    Symmetric,
    Asymmetric,
}

impl fmt::Display for InjectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InjectionMode::Symmetric => "symmetric",
            InjectionMode::Asymmetric => "asymmetric",
        })
    }
}

/// Output-mirror intensity transmissions, used only for the outside-cavity
/// quasi-probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmission {
    pub signal: f64,
    pub pump: f64,
}

impl Default for Transmission {
    fn default() -> Self {
        Transmission {
            signal: 1.0,
            pump: 1.0,
        }
    }
}

/// Physical and dimensionless parameters of the oscillator.
///
/// `kappa` is the signal/idler energy damping rate (the idler rate in
/// asymmetric mode), `kappa_p` the pump damping rate and `g` the parametric
/// coupling; all three are rates in the same time unit as the noise frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TropoParams {
    pub kappa: f64,
    pub kappa_p: f64,
    /// Pump drive relative to the oscillation threshold.
    pub mu_p: f64,
    /// Injected amplitude relative to the intracavity amplitude.
    pub mu: f64,
    pub g: f64,
    pub injection: InjectionMode,
    pub transmission: Transmission,
}

impl TropoParams {
    pub fn symmetric(kappa: f64, kappa_p: f64, mu_p: f64, mu: f64, g: f64) -> Self {
        TropoParams {
            kappa,
            kappa_p,
            mu_p,
            mu,
            g,
            injection: InjectionMode::Symmetric,
            transmission: Transmission::default(),
        }
    }

    pub fn asymmetric(kappa_idler: f64, kappa_p: f64, mu_p: f64, mu: f64, g: f64) -> Self {
        TropoParams {
            injection: InjectionMode::Asymmetric,
            ..TropoParams::symmetric(kappa_idler, kappa_p, mu_p, mu, g)
        }
    }

    pub fn with_transmission(mut self, signal: f64, pump: f64) -> Self {
        self.transmission = Transmission { signal, pump };
        self
    }

    pub fn is_symmetric(&self) -> bool {
        self.injection == InjectionMode::Symmetric
    }

    pub fn kappa_idler(&self) -> f64 {
        self.kappa
    }

    pub fn kappa_signal(&self) -> f64 {
        match self.injection {
            InjectionMode::Symmetric => self.kappa,
            InjectionMode::Asymmetric => self.kappa * (1.0 - self.mu),
        }
    }

    /// Hard validity checks; regime limits are reported by [`validate`].
    pub fn check(&self) -> Result<()> {
        positive("kappa", self.kappa)?;
        positive("kappa_p", self.kappa_p)?;
        positive("g", self.g)?;
        finite("mu_p", self.mu_p)?;
        finite("mu", self.mu)?;
        if self.mu_p <= 1.0 {
            return Err(Error::invalid(
                "mu_p",
                format!("{} is not above threshold (must exceed 1)", self.mu_p),
            ));
        }
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(Error::invalid("mu", format!("{} not in (0, 1)", self.mu)));
        }
        unit_interval("transmission.signal", self.transmission.signal)?;
        unit_interval("transmission.pump", self.transmission.pump)?;
        Ok(())
    }

    pub(crate) fn require_symmetric(&self, what: &'static str) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::invalid(
                "injection",
                format!("{what} is defined for symmetric injection only"),
            ))
        }
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} is not finite")))
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    finite(name, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} must be positive")))
    }
}

fn unit_interval(name: &'static str, v: f64) -> Result<()> {
    finite(name, v)?;
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} not in (0, 1]")))
    }
}

/// Injection parameter above which the small-injection expansions degrade.
pub const MU_REGIME_LIMIT: f64 = 0.35;

/// Non-fatal notice that the parameters leave the regime where the
/// simplified closed forms were derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeWarning {
    MuLarge {
        mu: f64,
    },
    /// `kappa * max(1, mu_p - 1)` exceeds a tenth of `kappa_p`.
    PumpDampingNotDominant {
        ratio: f64,
    },
}

impl RegimeWarning {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeWarning::MuLarge { .. } => "RegimeMuLarge",
            RegimeWarning::PumpDampingNotDominant { .. } => "RegimePumpDampingNotDominant",
        }
    }
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeWarning::MuLarge { mu } => {
                write!(f, "{}: mu = {mu} exceeds {MU_REGIME_LIMIT}", self.name())
            }
            RegimeWarning::PumpDampingNotDominant { ratio } => write!(
                f,
                "{}: kappa*max(1, mu_p-1)/kappa_p = {ratio:.4} exceeds 0.1",
                self.name()
            ),
        }
    }
}

pub fn validate(params: &TropoParams) -> Result<Vec<RegimeWarning>> {
    params.check()?;
    let mut warnings = Vec::new();
    if params.mu > MU_REGIME_LIMIT {
        warnings.push(RegimeWarning::MuLarge { mu: params.mu });
    }
    let ratio = params.kappa * (params.mu_p - 1.0).max(1.0) / params.kappa_p;
    if ratio > 0.1 {
        warnings.push(RegimeWarning::PumpDampingNotDominant { ratio });
    }
    Ok(warnings)
}

/// Mean intracavity photon numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    /// Signal (= idler) photon number.
    pub n_signal: f64,
    pub n_pump: f64,
    pub n_threshold: f64,
    /// Injected photon number, `mu^2 * n_signal`.
    pub n_injected: f64,
    /// Pump input photon number, `mu_p^2 * n_threshold`.
    pub n_pump_in: f64,
}

/// Relative residual tolerance accepted for the steady-state equalities.
pub const STEADY_STATE_TOLERANCE: f64 = 1e-12;

impl SteadyState {
    /// Relative residuals of the three defining equalities.
    ///
    /// Symmetric: `g sqrt(Np) = kappa (1-mu)/2`, `kappa (1-mu) N = kappa_p (mu_p-1) Np`,
    /// `Np_in = mu_p^2 N_th`. Asymmetric: `2 g sqrt(Np) = kappa_s`,
    /// `kappa_s N = (mu_p-1) kappa_p Np`, `kappa_s N = (1-mu) kappa_i N`.
    pub fn residuals(&self, p: &TropoParams) -> [f64; 3] {
        let n = self.n_signal;
        let np = self.n_pump;
        match p.injection {
            InjectionMode::Symmetric => [
                rel(p.g * np.sqrt(), 0.5 * p.kappa * (1.0 - p.mu)),
                rel(p.kappa * (1.0 - p.mu) * n, p.kappa_p * (p.mu_p - 1.0) * np),
                rel(self.n_pump_in, p.mu_p * p.mu_p * self.n_threshold),
            ],
            InjectionMode::Asymmetric => {
                let ks = p.kappa_signal();
                [
                    rel(2.0 * p.g * np.sqrt(), ks),
                    rel(ks * n, (p.mu_p - 1.0) * p.kappa_p * np),
                    rel(ks * n, (1.0 - p.mu) * p.kappa_idler() * n),
                ]
            }
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn steady_state(params: &TropoParams) -> Result<SteadyState> {
    params.check()?;
    let p = params;
    let g2 = p.g * p.g;
    let (n_threshold, n_pump, n_signal) = match p.injection {
        InjectionMode::Symmetric => {
            let n_th = p.kappa * p.kappa * (1.0 - p.mu) / (4.0 * g2);
            let amp = 0.5 * p.kappa * (1.0 - p.mu) / p.g;
            let np = amp * amp;
            let n = p.kappa_p * (p.mu_p - 1.0) * np / (p.kappa * (1.0 - p.mu));
            (n_th, np, n)
        }
        InjectionMode::Asymmetric => {
            let ks = p.kappa_signal();
            let np = ks * ks / (4.0 * g2);
            let n = (p.mu_p - 1.0) * ks * p.kappa_p / (4.0 * g2);
            (np, np, n)
        }
    };
    let state = SteadyState {
        n_signal,
        n_pump,
        n_threshold,
        n_injected: p.mu * p.mu * n_signal,
        n_pump_in: p.mu_p * p.mu_p * n_threshold,
    };
    let worst = state.residuals(p).into_iter().fold(0.0, f64::max);
    if !(worst <= STEADY_STATE_TOLERANCE) {
        return Err(Error::SteadyStateResidual { residual: worst });
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical() -> TropoParams {
        TropoParams::symmetric(1.0, 100.0, 2.0, 0.1, 0.01)
    }

    #[test]
    fn canonical_set_has_no_warnings() {
        assert!(validate(&canonical()).unwrap().is_empty());
    }

    #[test]
    fn weak_pump_damping_is_flagged() {
        let p = TropoParams::symmetric(1.0, 2.0, 4.0, 0.1, 0.01);
        let w = validate(&p).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].name(), "RegimePumpDampingNotDominant");
    }

    #[test]
    fn large_injection_is_flagged() {
        let p = TropoParams::symmetric(1.0, 100.0, 2.0, 0.5, 0.01);
        let names: Vec<_> = validate(&p).unwrap().iter().map(|w| w.name()).collect();
        assert_eq!(names, ["RegimeMuLarge"]);
    }

    #[test]
    fn below_threshold_is_rejected() {
        let p = TropoParams::symmetric(1.0, 100.0, 0.9, 0.1, 0.01);
        assert!(matches!(
            validate(&p),
            Err(Error::InvalidParameter { name: "mu_p", .. })
        ));
    }

    #[test]
    fn bad_fields_are_rejected() {
        let base = canonical();
        let cases = [
            TropoParams { kappa: 0.0, ..base },
            TropoParams {
                kappa_p: -1.0,
                ..base
            },
            TropoParams {
                g: f64::NAN,
                ..base
            },
            TropoParams { mu: 0.0, ..base },
            TropoParams { mu: 1.0, ..base },
            TropoParams {
                mu_p: f64::INFINITY,
                ..base
            },
            base.with_transmission(0.0, 1.0),
            base.with_transmission(1.0, 1.5),
        ];
        for p in cases {
            let err = steady_state(&p).unwrap_err();
            assert!(err.is_invalid_input(), "{p:?} -> {err}");
        }
    }

    #[test]
    fn canonical_symmetric_values() {
        let s = steady_state(&canonical()).unwrap();
        assert!((s.n_threshold - 2250.0).abs() < 1e-9);
        assert!((s.n_pump - 2025.0).abs() < 1e-9);
        assert!((s.n_signal - 225_000.0).abs() < 1e-6);
        assert!((s.n_pump_in - 9000.0).abs() < 1e-9);
        assert!((s.n_injected - 2250.0).abs() < 1e-6);
    }

    #[test]
    fn canonical_asymmetric_values() {
        let p = TropoParams::asymmetric(1.0, 100.0, 2.0, 0.1, 0.01);
        assert!((p.kappa_signal() - 0.9).abs() < 1e-15);
        let s = steady_state(&p).unwrap();
        assert!((s.n_pump - 2025.0).abs() < 1e-9);
        assert!((s.n_signal - 0.9 * 100.0 / 4e-4).abs() < 1e-6);
        assert!(s.residuals(&p).iter().all(|r| *r < 1e-14));
    }

    #[test]
    fn threshold_limit_empties_the_cavity() {
        let mut last = f64::INFINITY;
        for k in 1..8 {
            let p = TropoParams::symmetric(1.0, 100.0, 1.0 + 10f64.powi(-k), 0.1, 0.01);
            let n = steady_state(&p).unwrap().n_signal;
            assert!(n < last);
            assert!((n - 225000.0 * 10f64.powi(-k)).abs() < 1e-9 * n);
            last = n;
        }
    }
}
