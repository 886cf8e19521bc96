//! Quantum and classical emission spectra of a lossy cavity mode coupled to
//! a dipole, from weak to ultrastrong coupling.
//!
//! The quantum route diagonalises a Hopfield or Rabi Hamiltonian
//! ([`models`]), builds a non-secular dressed-state master equation
//! ([`gme`]) and evaluates the emission spectrum from the Liouvillian
//! resolvent ([`spectra`]). The classical route evaluates a damped
//! coupled-oscillator transfer function. [`harness`] runs both on a common
//! grid and compares the lineshapes.
//!
//! ```
//! use usc_spectra::models::{hopfield_poles_resonant, energy_levels, ModelParams};
//!
//! let levels = energy_levels(&ModelParams::hopfield(0.5, 24, 24)?)?;
//! let poles = hopfield_poles_resonant(0.5, 1.0)?;
//! assert!((levels[1] - levels[0] - poles.omega_minus).abs() < 1e-8);
//! # Ok::<(), usc_spectra::Error>(())
//! ```
//!
//! The guide in `book/` walks through each stage; its code blocks run as
//! doc-tests of this crate.

pub mod error;
pub mod gme;
pub mod harness;
pub mod models;
pub mod numeric;
pub mod operators;
pub mod spectra;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    mod conventions {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/master-equation.md")]
    mod master_equation {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
}
