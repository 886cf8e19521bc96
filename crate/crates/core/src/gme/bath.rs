use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{physical_cavity_op, ModelParams};
use crate::operators::{ComplexMatrix, C64};

/// Cavity quadrature that couples to the bath.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PiChoice {
    /// `i(a† − a)`.
    #[serde(alias = "p")]
    P,
    /// `a + a†`.
    #[serde(alias = "q")]
    Q,
    /// `(P + Q)/√2`.
    #[serde(alias = "p_plus_q", alias = "P+Q")]
    PplusQ,
    /// `(P − Q)/√2`.
    #[serde(alias = "p_minus_q", alias = "P-Q")]
    PminusQ,
}

impl PiChoice {
    pub fn label(self) -> &'static str {
        match self {
            PiChoice::P => "P",
            PiChoice::Q => "Q",
            PiChoice::PplusQ => "(P+Q)/sqrt2",
            PiChoice::PminusQ => "(P-Q)/sqrt2",
        }
    }

    /// `Π` built from a cavity annihilation operator `a` (bare or primed).
    pub fn operator(self, a: &ComplexMatrix) -> ComplexMatrix {
        let ad = a.adjoint();
        let p = (&ad - a).scale(C64::new(0.0, 1.0));
        let q = a + &ad;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            PiChoice::P => p,
            PiChoice::Q => q,
            PiChoice::PplusQ => (&p + &q).scale(C64::new(r, 0.0)),
            PiChoice::PminusQ => (&p - &q).scale(C64::new(r, 0.0)),
        }
    }
}

/// Bath decay rate as a function of transition frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RateModel {
    /// `Γ(ω) = κ` for every `ω > 0`.
    #[default]
    Flat,
}

impl RateModel {
    pub fn rate(self, kappa: f64, omega: f64) -> f64 {
        match self {
            RateModel::Flat => {
                if omega > 0.0 {
                    kappa
                } else {
                    0.0
                }
            }
        }
    }
}

/// Cavity bath: coupling quadrature, loss rate and weak incoherent pump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub pi_choice: PiChoice,
    /// Build `Π` from `a' = a + iησx` in the dipole gauge.
    pub gauge_corrected: bool,
    pub kappa: f64,
    /// Incoherent pump rate `P_c`.
    pub pump: f64,
    #[serde(default)]
    pub rate_model: RateModel,
}

/// Default pump as a fraction of `kappa`.
pub const DEFAULT_PUMP_FRACTION: f64 = 1e-4;
/// Pumps above this fraction of `kappa` leave the weak-excitation regime.
pub const WEAK_PUMP_LIMIT: f64 = 1e-2;

impl BathSpec {
    /// Gauge-corrected bath with the default weak pump.
    pub fn new(pi_choice: PiChoice, kappa: f64) -> Result<Self> {
        let bath = Self {
            pi_choice,
            gauge_corrected: true,
            kappa,
            pump: DEFAULT_PUMP_FRACTION * kappa,
            rate_model: RateModel::Flat,
        };
        bath.validate()?;
        Ok(bath)
    }

    pub fn with_gauge_correction(mut self, gauge_corrected: bool) -> Self {
        self.gauge_corrected = gauge_corrected;
        self
    }

    pub fn with_pump(mut self, pump: f64) -> Result<Self> {
        self.pump = pump;
        self.validate()?;
        Ok(self)
    }

    pub fn rate(&self, omega: f64) -> f64 {
        self.rate_model.rate(self.kappa, omega)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::invalid("kappa", format!("must be finite and > 0, got {}", self.kappa)));
        }
        if !(self.pump.is_finite() && self.pump >= 0.0) {
            return Err(Error::invalid("pump", format!("must be finite and >= 0, got {}", self.pump)));
        }
        for w in self.warnings() {
            log::warn!("{w}");
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.pump > WEAK_PUMP_LIMIT * self.kappa {
            out.push(format!(
                "pump {} exceeds {WEAK_PUMP_LIMIT} kappa; the spectrum is no longer in the weak-excitation regime",
                self.pump
            ));
        }
        out
    }

    /// `Π` on the full space of `model`, from the bare or corrected field as
    /// selected by `gauge_corrected` and the model's gauge.
    pub fn coupling_operator(&self, model: &ModelParams) -> Result<ComplexMatrix> {
        let a = physical_cavity_op(model, self.gauge_corrected)?;
        Ok(self.pi_choice.operator(&a))
    }
}
