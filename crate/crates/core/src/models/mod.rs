//! Cavity–dipole Hamiltonians in the dipole and Coulomb gauges, gauge
//! corrected cavity operators, and closed-form polariton frequencies.

mod gauge;
mod hamiltonian;
mod params;
mod poles;

pub use gauge::{cavity_quadratures, gauge_corrected_cavity_op, physical_cavity_op, CavityQuadratures};
pub use hamiltonian::{build_hamiltonian, dressed_states, energy_levels};
pub use params::{Gauge, ModelKind, ModelParams};
pub(crate) use params::positive;
pub use poles::{
    bloch_siegert_poles, ground_state_energy, hopfield_poles_general, hopfield_poles_resonant,
    no_diamagnetic_poles, qrm_bs_poles, FlaggedPolePair, PolePair,
};
