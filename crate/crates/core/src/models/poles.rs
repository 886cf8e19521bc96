use serde::Serialize;

use super::params::positive;
use crate::error::{Error, Result};

/// Lower and upper polariton frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolePair {
    pub omega_minus: f64,
    pub omega_plus: f64,
}

impl PolePair {
    fn new(omega_minus: f64, omega_plus: f64) -> Self {
        debug_assert!(omega_plus >= omega_minus);
        Self { omega_minus, omega_plus }
    }

    pub fn splitting(&self) -> f64 {
        self.omega_plus - self.omega_minus
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.omega_plus + self.omega_minus)
    }
}

/// Result of a formula whose lower branch can become imaginary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlaggedPolePair {
    pub poles: PolePair,
    /// Set when the lower pole is not a real frequency; `omega_minus` then
    /// holds 0.
    pub lower_invalid: bool,
}

fn coupling(eta: f64) -> Result<()> {
    if eta.is_finite() && eta >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("eta", format!("must be finite and >= 0, got {eta}")))
    }
}

/// Exact Hopfield polaritons at arbitrary detuning.
///
/// After the Bogoliubov transformation of the matter oscillator,
/// `ω̃0² = ω0² + 4Dω0` with `D = g²/ωc` and `g̃² = g² ω0/ω̃0`, and
///
/// `ω±² = ½[ω̃0² + ωc² ± √((ω̃0² − ωc²)² + 16 g̃² ω̃0 ωc)]`.
///
/// At resonance `ω̃0 = ω0 √(1 + 4η²)`.
pub fn hopfield_poles_general(omega_0: f64, omega_c: f64, g: f64) -> Result<PolePair> {
    positive("omega_0", omega_0)?;
    positive("omega_c", omega_c)?;
    if !(g.is_finite() && g >= 0.0) {
        return Err(Error::invalid("g", format!("must be finite and >= 0, got {g}")));
    }
    let d = g * g / omega_c;
    let w0t2 = omega_0 * omega_0 + 4.0 * d * omega_0;
    let w0t = w0t2.sqrt();
    let gt2 = g * g * omega_0 / w0t;
    let wc2 = omega_c * omega_c;
    let root = ((w0t2 - wc2).powi(2) + 16.0 * gt2 * w0t * omega_c).sqrt();
    let plus2 = 0.5 * (w0t2 + wc2 + root);
    // ω+² ω−² = ω0² ωc² avoids cancellation in the lower branch.
    let minus2 = (omega_0 * omega_c).powi(2) / plus2;
    Ok(PolePair::new(minus2.sqrt(), plus2.sqrt()))
}

/// Resonant Hopfield polaritons, `ω± = ω0 √(1 + 2η² ± 2η√(1 + η²))`.
pub fn hopfield_poles_resonant(eta: f64, omega_0: f64) -> Result<PolePair> {
    coupling(eta)?;
    positive("omega_0", omega_0)?;
    let s = 2.0 * eta * (1.0 + eta * eta).sqrt();
    let base = 1.0 + 2.0 * eta * eta;
    let plus = omega_0 * (base + s).sqrt();
    // ω+ ω− = ω0².
    Ok(PolePair::new(omega_0 * omega_0 / plus, plus))
}

/// Leading counter-rotating correction for the Hopfield model,
/// `ω0(1 + η²/2) ± g`. Accurate to O(η³).
pub fn bloch_siegert_poles(eta: f64, omega_0: f64) -> Result<PolePair> {
    coupling(eta)?;
    positive("omega_0", omega_0)?;
    let center = omega_0 * (1.0 + 0.5 * eta * eta);
    let g = eta * omega_0;
    Ok(PolePair::new(center - g, center + g))
}

/// Hopfield polaritons without the diamagnetic term, `ω0 √(1 ± 2η)`.
///
/// The lower branch reaches zero at η = 0.5 and is imaginary beyond; such
/// results are flagged rather than returned as NaN.
pub fn no_diamagnetic_poles(eta: f64, omega_0: f64) -> Result<FlaggedPolePair> {
    coupling(eta)?;
    positive("omega_0", omega_0)?;
    let plus = omega_0 * (1.0 + 2.0 * eta).sqrt();
    let lower_sq = 1.0 - 2.0 * eta;
    let lower_invalid = lower_sq <= 0.0;
    let minus = if lower_invalid { 0.0 } else { omega_0 * lower_sq.sqrt() };
    Ok(FlaggedPolePair {
        poles: PolePair::new(minus, plus),
        lower_invalid,
    })
}

/// Leading counter-rotating correction for the Rabi model,
/// `ω0 ± g √(1 + η²/4)`. The centre stays at `ω0`.
pub fn qrm_bs_poles(eta: f64, omega_0: f64) -> Result<PolePair> {
    coupling(eta)?;
    positive("omega_0", omega_0)?;
    let half = eta * omega_0 * (1.0 + 0.25 * eta * eta).sqrt();
    Ok(PolePair::new(omega_0 - half, omega_0 + half))
}

/// Resonant Hopfield ground-state energy `(ω+ + ω−)/2 − ω0 = ω0(√(1+η²) − 1)`.
///
/// This is the lowest eigenvalue of the dipole-gauge Hamiltonian as built by
/// [`build_hamiltonian`](super::build_hamiltonian), constant `D` included.
pub fn ground_state_energy(eta: f64, omega_0: f64) -> Result<f64> {
    coupling(eta)?;
    positive("omega_0", omega_0)?;
    Ok(omega_0 * ((1.0 + eta * eta).sqrt() - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{dressed_states, ModelParams};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn decoupled_limits() {
        let p = hopfield_poles_general(1.0, 1.4, 0.0).unwrap();
        close(p.omega_minus, 1.0, 1e-15);
        close(p.omega_plus, 1.4, 1e-15);
        let p = hopfield_poles_general(1.0, 0.6, 0.0).unwrap();
        close(p.omega_minus, 0.6, 1e-15);
        close(p.omega_plus, 1.0, 1e-15);
        for f in [hopfield_poles_resonant, bloch_siegert_poles, qrm_bs_poles] {
            let p = f(0.0, 1.0).unwrap();
            assert_eq!((p.omega_minus, p.omega_plus), (1.0, 1.0));
        }
        let p = no_diamagnetic_poles(0.0, 1.0).unwrap();
        assert!(!p.lower_invalid);
        assert_eq!(p.poles.omega_minus, 1.0);
        assert_eq!(ground_state_energy(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn resonant_reference_values() {
        let p = hopfield_poles_resonant(0.5, 1.0).unwrap();
        close(p.omega_minus, 0.618034, 1e-6);
        close(p.omega_plus, 1.618034, 1e-6);
        let p = hopfield_poles_resonant(0.3, 1.0).unwrap();
        close(p.omega_minus, 0.74403, 1e-5);
        close(p.omega_plus, 1.34403, 1e-5);
        let p = hopfield_poles_resonant(0.1, 1.0).unwrap();
        close(p.omega_minus, 0.904988, 1e-6);
        close(p.omega_plus, 1.104988, 1e-6);
    }

    #[test]
    fn general_reduces_to_resonant() {
        for eta in [0.0, 0.05, 0.1, 0.3, 0.5, 1.0, 2.0] {
            let r = hopfield_poles_resonant(eta, 1.0).unwrap();
            let g = hopfield_poles_general(1.0, 1.0, eta).unwrap();
            close(r.omega_minus, g.omega_minus, 1e-12);
            close(r.omega_plus, g.omega_plus, 1e-12);
        }
    }

    #[test]
    fn general_matches_detuned_diagonalisation() {
        let omega_c = 1.3;
        let eta = 0.4;
        let params = ModelParams::hopfield(eta, 40, 40).unwrap().with_omega_c(omega_c).unwrap();
        let ex = dressed_states(&params).unwrap().excitation_energies();
        let poles = hopfield_poles_general(1.0, omega_c, eta * omega_c).unwrap();
        close(ex[1], poles.omega_minus, 1e-6);
        let nearest = ex[2..6]
            .iter()
            .map(|e| (e - poles.omega_plus).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-6, "{:?} vs {}", &ex[..6], poles.omega_plus);
    }

    #[test]
    fn bloch_siegert_reference_values() {
        let p = bloch_siegert_poles(0.1, 1.0).unwrap();
        close(p.omega_minus, 0.905, 1e-12);
        close(p.omega_plus, 1.105, 1e-12);
        let exact = hopfield_poles_resonant(0.1, 1.0).unwrap();
        close(p.omega_minus, exact.omega_minus, 5e-5);
        close(p.omega_plus, exact.omega_plus, 5e-5);
        let p = bloch_siegert_poles(0.5, 1.0).unwrap();
        close(p.omega_minus, 0.625, 1e-12);
        close(p.omega_plus, 1.625, 1e-12);
        let exact = hopfield_poles_resonant(0.5, 1.0).unwrap();
        close(p.omega_plus - exact.omega_plus, 0.007, 5e-4);
    }

    #[test]
    fn bloch_siegert_error_is_cubic() {
        let etas: Vec<f64> = (1..=20).map(|k| 0.01 * k as f64).collect();
        for &eta in &etas {
            let exact = hopfield_poles_resonant(eta, 1.0).unwrap();
            let bs = bloch_siegert_poles(eta, 1.0).unwrap();
            let err = (exact.omega_minus - bs.omega_minus)
                .abs()
                .max((exact.omega_plus - bs.omega_plus).abs());
            assert!(err <= 0.05 * eta.powi(3), "eta {eta}: {err:e}");
        }
    }

    #[test]
    fn no_diamagnetic_reference_values() {
        let p = no_diamagnetic_poles(0.25, 1.0).unwrap();
        assert!(!p.lower_invalid);
        close(p.poles.omega_minus, 0.70711, 1e-5);
        close(p.poles.omega_plus, 1.22474, 1e-5);
        let p = no_diamagnetic_poles(0.5, 1.0).unwrap();
        assert!(p.lower_invalid);
        assert_eq!(p.poles.omega_minus, 0.0);
        let p = no_diamagnetic_poles(0.8, 1.0).unwrap();
        assert!(p.lower_invalid && p.poles.omega_minus == 0.0 && p.poles.omega_plus.is_finite());
    }

    #[test]
    fn qrm_bloch_siegert() {
        let p = qrm_bs_poles(0.1, 1.0).unwrap();
        close(p.omega_minus, 0.899875, 1e-6);
        close(p.omega_plus, 1.100125, 1e-6);
        close(p.center(), 1.0, 1e-15);
        let hop = bloch_siegert_poles(0.1, 1.0).unwrap();
        close(hop.center() - p.center(), 0.005, 1e-12);
    }

    #[test]
    fn ground_state_energy_matches_poles_and_diagonalisation() {
        close(ground_state_energy(0.5, 1.0).unwrap(), 0.118034, 1e-6);
        for eta in [0.1, 0.5, 1.0] {
            let p = hopfield_poles_resonant(eta, 1.0).unwrap();
            close(ground_state_energy(eta, 1.0).unwrap(), p.center() - 1.0, 1e-12);
        }
        let params = ModelParams::hopfield(0.5, 40, 40).unwrap();
        let e0 = dressed_states(&params).unwrap().values()[0];
        close(e0, ground_state_energy(0.5, 1.0).unwrap(), 1e-5);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(hopfield_poles_general(0.0, 1.0, 0.1).is_err());
        assert!(hopfield_poles_general(1.0, 1.0, -0.1).is_err());
        assert!(hopfield_poles_resonant(-0.1, 1.0).is_err());
        assert!(no_diamagnetic_poles(f64::NAN, 1.0).is_err());
        assert!(ground_state_energy(0.1, -1.0).is_err());
    }
}
