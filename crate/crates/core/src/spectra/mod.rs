//! Classical and quantum emission spectra, peak analysis and comparison.

mod classical;
mod peaks;
mod quantum;
mod spectrum;

pub use classical::{cavity_green, classical_spectrum, dressed_polarizability, ClassicalParams, Microscopic};
pub use peaks::{compare_spectra, compare_spectra_with, find_peaks, Comparison, Peak, DEFAULT_PROMINENCE};
pub use quantum::{emission_spectrum, emission_spectrum_with, quantum_spectrum};
pub use spectrum::{Grid, Normalization, Provenance, Spectrum, DEFAULT_GRID};
