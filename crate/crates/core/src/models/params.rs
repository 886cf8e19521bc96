use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{HilbertSpace, MatterKind};

/// Which light–matter model: a bosonic dipole or a two-level dipole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Hopfield,
    #[serde(alias = "qrm")]
    Rabi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    Dipole,
    Coulomb,
}

/// Physical parameters of one cavity–dipole system, frequencies in units of
/// the bare dipole frequency.
///
/// The coupling is given through `eta = g / omega_c`; `g` and the diamagnetic
/// amplitude `D = eta * g` are derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega_c: f64,
    pub omega_0: f64,
    pub eta: f64,
    pub model: ModelKind,
    pub gauge: Gauge,
    /// Keep the `D` term. Hopfield only.
    pub diamagnetic: bool,
    pub space: HilbertSpace,
}

impl ModelParams {
    /// Resonant dipole-gauge Hopfield model with the diamagnetic term.
    pub fn hopfield(eta: f64, cavity_dim: usize, matter_dim: usize) -> Result<Self> {
        Self {
            omega_c: 1.0,
            omega_0: 1.0,
            eta,
            model: ModelKind::Hopfield,
            gauge: Gauge::Dipole,
            diamagnetic: true,
            space: HilbertSpace::hopfield(cavity_dim, matter_dim)?,
        }
        .validated()
    }

    /// Resonant dipole-gauge quantum Rabi model.
    pub fn rabi(eta: f64, cavity_dim: usize) -> Result<Self> {
        Self {
            omega_c: 1.0,
            omega_0: 1.0,
            eta,
            model: ModelKind::Rabi,
            gauge: Gauge::Dipole,
            diamagnetic: false,
            space: HilbertSpace::rabi(cavity_dim)?,
        }
        .validated()
    }

    pub fn with_gauge(mut self, gauge: Gauge) -> Self {
        self.gauge = gauge;
        self
    }

    pub fn with_omega_c(mut self, omega_c: f64) -> Result<Self> {
        self.omega_c = omega_c;
        self.validated()
    }

    pub fn with_diamagnetic(mut self, diamagnetic: bool) -> Result<Self> {
        self.diamagnetic = diamagnetic;
        self.validated()
    }

    /// Same physics on a different truncation.
    pub fn with_space(mut self, space: HilbertSpace) -> Result<Self> {
        self.space = space;
        self.validated()
    }

    pub fn g(&self) -> f64 {
        self.eta * self.omega_c
    }

    /// Diamagnetic amplitude; zero when the term is switched off.
    pub fn d(&self) -> f64 {
        if self.diamagnetic {
            self.eta * self.g()
        } else {
            0.0
        }
    }

    pub fn is_resonant(&self) -> bool {
        (self.omega_c - self.omega_0).abs() <= 1e-12 * self.omega_0
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega_c", self.omega_c)?;
        positive("omega_0", self.omega_0)?;
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::invalid("eta", format!("must be finite and >= 0, got {}", self.eta)));
        }
        match (self.model, self.space.matter()) {
            (ModelKind::Hopfield, MatterKind::Boson(_)) => Ok(()),
            (ModelKind::Rabi, MatterKind::TwoLevel) => {
                if self.diamagnetic {
                    Err(Error::invalid("diamagnetic", "the Rabi model has no diamagnetic term"))
                } else {
                    Ok(())
                }
            }
            (ModelKind::Hopfield, MatterKind::TwoLevel) => {
                Err(Error::invalid("space", "Hopfield model needs a bosonic matter factor"))
            }
            (ModelKind::Rabi, MatterKind::Boson(_)) => {
                Err(Error::invalid("space", "Rabi model needs a two-level matter factor"))
            }
        }
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_couplings() {
        let p = ModelParams::hopfield(0.5, 4, 4).unwrap().with_omega_c(2.0).unwrap();
        assert_eq!(p.g(), 1.0);
        assert_eq!(p.d(), 0.5);
        assert_eq!(p.with_diamagnetic(false).unwrap().d(), 0.0);
        assert!(!p.is_resonant());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModelParams::hopfield(-0.1, 4, 4).is_err());
        assert!(ModelParams::hopfield(f64::NAN, 4, 4).is_err());
        assert!(ModelParams::hopfield(0.1, 4, 4).unwrap().with_omega_c(0.0).is_err());
        assert!(ModelParams::rabi(0.1, 4).unwrap().with_diamagnetic(true).is_err());
        let rabi_space = HilbertSpace::rabi(4).unwrap();
        assert!(ModelParams::hopfield(0.1, 4, 4).unwrap().with_space(rabi_space).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let p = ModelParams::rabi(0.3, 6).unwrap().with_gauge(Gauge::Coulomb);
        let text = serde_json::to_string(&p).unwrap();
        let back: ModelParams = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
    }
}
