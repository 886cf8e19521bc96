use serde::{Deserialize, Serialize};

use super::spectrum::{Grid, Spectrum};
use crate::error::{Error, Result};
use crate::models::{positive, ModelParams};
use crate::operators::C64;

/// Microscopic origin of the coupling, in units with `ε₀ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Microscopic {
    /// Dipole moment `d`.
    pub d: f64,
    /// Effective mode volume.
    pub v_eff: f64,
    /// Background dielectric constant.
    pub eps_b: f64,
}

impl Microscopic {
    /// `g` from `4g² = d² ωc / (2 V_eff ε_b)`.
    pub fn coupling(&self, omega_c: f64) -> f64 {
        (self.d * self.d * omega_c / (2.0 * self.v_eff * self.eps_b)).sqrt() / 2.0
    }

    /// Bare polarizability amplitude `2d²`.
    pub fn a_0(&self) -> f64 {
        2.0 * self.d * self.d
    }

    /// Cavity amplitude `1/(V_eff ε_b)`.
    pub fn a_c(&self) -> f64 {
        1.0 / (self.v_eff * self.eps_b)
    }
}

/// Coupled-oscillator parameters, frequencies in units of the bare dipole
/// frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalParams {
    pub omega_c: f64,
    pub omega_0: f64,
    pub g: f64,
    /// Cavity loss rate; zero gives the lossless response.
    pub kappa: f64,
    pub a_0: f64,
    pub a_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub microscopic: Option<Microscopic>,
}

impl ClassicalParams {
    /// Unit amplitudes `A₀ = A_c = 1`.
    pub fn new(omega_c: f64, omega_0: f64, g: f64, kappa: f64) -> Result<Self> {
        let p = Self {
            omega_c,
            omega_0,
            g,
            kappa,
            a_0: 1.0,
            a_c: 1.0,
            microscopic: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same frequencies and coupling as a quantum model.
    pub fn from_model(model: &ModelParams, kappa: f64) -> Result<Self> {
        Self::new(model.omega_c, model.omega_0, model.g(), kappa)
    }

    /// Coupling and amplitudes derived from the dipole and the mode.
    pub fn from_microscopic(omega_c: f64, omega_0: f64, kappa: f64, micro: Microscopic) -> Result<Self> {
        let p = Self {
            omega_c,
            omega_0,
            g: micro.coupling(omega_c),
            kappa,
            a_0: micro.a_0(),
            a_c: micro.a_c(),
            microscopic: Some(micro),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega_c", self.omega_c)?;
        positive("omega_0", self.omega_0)?;
        for (name, v) in [("g", self.g), ("kappa", self.kappa)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if let Some(m) = self.microscopic {
            positive("microscopic.d", m.d)?;
            positive("microscopic.v_eff", m.v_eff)?;
            positive("microscopic.eps_b", m.eps_b)?;
            let lhs = 4.0 * self.g * self.g;
            let rhs = m.d * m.d * self.omega_c / (2.0 * m.v_eff * m.eps_b);
            if (lhs - rhs).abs() > 1e-10 * rhs {
                return Err(Error::invalid(
                    "g",
                    format!("4g^2 = {lhs} disagrees with d^2 omega_c / (2 V_eff eps_b) = {rhs}"),
                ));
            }
        }
        Ok(())
    }

    fn cavity_denominator(&self, omega: f64) -> C64 {
        C64::new(self.omega_c * self.omega_c - omega * omega, -omega * self.kappa)
    }
}

fn frequency(omega: f64) -> Result<()> {
    if omega.is_finite() && omega >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("omega", format!("must be finite and >= 0, got {omega}")))
    }
}

/// Single-mode cavity Green function `A_c ω² / (ωc² − ω² − iωκ)`.
///
/// The poles sit at `Im ω = −κ/2`, so the response is retarded.
pub fn cavity_green(omega: f64, cp: &ClassicalParams) -> Result<C64> {
    frequency(omega)?;
    let den = cp.cavity_denominator(omega);
    if den.norm() == 0.0 {
        return Err(Error::Pole { omega });
    }
    Ok(C64::new(cp.a_c * omega * omega, 0.0) / den)
}

/// Dipole polarizability dressed by the cavity,
///
/// `α(ω) = A₀ω₀ / (ω₀² − ω² − (ω₀/ωc) 4g²ω² / (ωc² − ω² − iωκ))`.
///
/// In the lossless case its poles are the polariton frequencies.
pub fn dressed_polarizability(omega: f64, cp: &ClassicalParams) -> Result<C64> {
    frequency(omega)?;
    let w2 = omega * omega;
    let bare = C64::new(cp.omega_0 * cp.omega_0 - w2, 0.0);
    let cav = cp.cavity_denominator(omega);
    let coupling = 4.0 * cp.g * cp.g * w2 * cp.omega_0 / cp.omega_c;
    if cav.norm() == 0.0 {
        // α → 0 at the bare cavity pole when g > 0.
        return if coupling > 0.0 {
            Ok(C64::new(0.0, 0.0))
        } else {
            Err(Error::Pole { omega })
        };
    }
    let den = bare - C64::new(coupling, 0.0) / cav;
    if den.norm() == 0.0 {
        return Err(Error::Pole { omega });
    }
    Ok(C64::new(cp.a_0 * cp.omega_0, 0.0) / den)
}

/// Classical emitted intensity with `F E₀² = 1`,
///
/// `S(ω) = |g²ω² / ((ω² − ωc² − iωκ)(ω² − ω₀²) − 4g²ω²)|²`.
pub fn classical_spectrum(grid: &Grid, cp: &ClassicalParams) -> Result<Spectrum> {
    cp.validate()?;
    if cp.kappa <= 0.0 {
        return Err(Error::invalid("kappa", "the emitted spectrum needs kappa > 0"));
    }
    let g2 = cp.g * cp.g;
    let samples = grid
        .points()
        .iter()
        .map(|&w| {
            let w2 = w * w;
            let den = C64::new(w2 - cp.omega_c * cp.omega_c, -w * cp.kappa) * (w2 - cp.omega_0 * cp.omega_0)
                - 4.0 * g2 * w2;
            let value = (C64::new(g2 * w2, 0.0) / den).norm_sqr();
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::Pole { omega: w })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Spectrum::new(grid.clone(), samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::hopfield_poles_resonant;
    use crate::spectra::find_peaks;

    fn resonant(eta: f64, kappa: f64) -> ClassicalParams {
        ClassicalParams::new(1.0, 1.0, eta, kappa).unwrap()
    }

    /// Bisection on a sign change of `f` in `[a, b]`.
    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(a).signum() == f(m).signum() {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn green_function_limits() {
        let cp = resonant(0.3, 0.1);
        assert_eq!(cavity_green(0.0, &cp).unwrap(), C64::new(0.0, 0.0));
        let far = cavity_green(1e6, &cp).unwrap();
        assert!((far - C64::new(-cp.a_c, 0.0)).norm() < 1e-6);
        assert!(matches!(cavity_green(1.0, &resonant(0.3, 0.0)), Err(Error::Pole { .. })));
        assert!(cavity_green(-1.0, &cp).is_err());
    }

    #[test]
    fn green_function_poles_are_retarded() {
        // Roots of ωc² − ω² − iωκ: ω = (−iκ ± √(4ωc² − κ²))/2.
        let (wc, kappa) = (1.3f64, 0.2f64);
        let disc = (4.0 * wc * wc - kappa * kappa).sqrt();
        for root in [C64::new(disc / 2.0, -kappa / 2.0), C64::new(-disc / 2.0, -kappa / 2.0)] {
            let den = C64::new(wc * wc, 0.0) - root * root - C64::new(0.0, kappa) * root;
            assert!(den.norm() < 1e-12);
            assert!(root.im < 0.0);
        }
    }

    #[test]
    fn bare_and_static_polarizability() {
        let cp = resonant(0.0, 0.0);
        let w = 0.4;
        let alpha = dressed_polarizability(w, &cp).unwrap();
        assert!((alpha - C64::new(1.0 / (1.0 - w * w), 0.0)).norm() < 1e-14);
        let cp = ClassicalParams {
            a_0: 3.0,
            ..ClassicalParams::new(1.2, 0.8, 0.4, 0.05).unwrap()
        };
        let static_alpha = dressed_polarizability(0.0, &cp).unwrap();
        assert!((static_alpha - C64::new(3.0 / 0.8, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lossless_polarizability_poles_are_polaritons() {
        let cp = resonant(0.5, 0.0);
        // 1/α crosses zero at a pole; landing on it exactly is a root too.
        let inv = |w: f64| match dressed_polarizability(w, &cp) {
            Ok(alpha) => 1.0 / alpha.re,
            Err(Error::Pole { .. }) => 0.0,
            Err(e) => panic!("{e}"),
        };
        let lower = bisect(inv, 0.3, 0.9);
        let upper = bisect(inv, 1.1, 2.0);
        let exact = hopfield_poles_resonant(0.5, 1.0).unwrap();
        assert!((lower - exact.omega_minus).abs() < 1e-10);
        assert!((upper - exact.omega_plus).abs() < 1e-10);
        assert!((lower - 0.61803).abs() < 1e-5 && (upper - 1.61803).abs() < 1e-5);
    }

    #[test]
    fn spectrum_vanishes_without_coupling() {
        let s = classical_spectrum(&Grid::default(), &resonant(0.0, 0.05)).unwrap();
        assert_eq!(s.max(), 0.0);
    }

    #[test]
    fn spectrum_at_resonance_is_one_sixteenth() {
        let grid = Grid::from_points(vec![0.5, 1.0, 1.5]).unwrap();
        for (eta, kappa) in [(0.1, 0.01), (0.5, 0.3), (1.0, 2.0)] {
            let s = classical_spectrum(&grid, &resonant(eta, kappa)).unwrap();
            assert!((s.intensity()[1] - 1.0 / 16.0).abs() < 1e-14);
        }
    }

    #[test]
    fn strong_coupling_doublet() {
        let cp = resonant(0.5, 0.025);
        let s = classical_spectrum(&Grid::default(), &cp).unwrap().normalized();
        let peaks = find_peaks(&s, 0.05);
        assert_eq!(peaks.len(), 2);
        assert!((peaks[0].omega / 0.618034 - 1.0).abs() < 5e-3);
        assert!((peaks[1].omega / 1.618034 - 1.0).abs() < 5e-3);
    }

    #[test]
    fn peaks_approach_poles_for_small_loss() {
        let cp = resonant(0.5, 0.005);
        let grid = Grid::linspace(0.4, 2.0, 16001).unwrap();
        let peaks = find_peaks(&classical_spectrum(&grid, &cp).unwrap().normalized(), 0.05);
        let exact = hopfield_poles_resonant(0.5, 1.0).unwrap();
        assert!((peaks[0].omega / exact.omega_minus - 1.0).abs() < 1e-3);
        assert!((peaks[1].omega / exact.omega_plus - 1.0).abs() < 1e-3);
    }

    #[test]
    fn microscopic_consistency() {
        let micro = Microscopic { d: 0.8, v_eff: 2.0, eps_b: 1.5 };
        let cp = ClassicalParams::from_microscopic(1.0, 1.0, 0.05, micro).unwrap();
        assert!((4.0 * cp.g * cp.g - 0.64 / 6.0).abs() < 1e-15);
        assert!((cp.a_0 - 1.28).abs() < 1e-15);
        let broken = ClassicalParams { g: cp.g * 1.001, ..cp };
        assert!(broken.validate().is_err());
    }
}
