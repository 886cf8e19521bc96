//! Dressed-state master equation: transition operators, the non-secular
//! cavity dissipator, incoherent pump, Liouvillian and steady state.

mod bath;
mod liouvillian;
mod steady;
mod transitions;

pub use bath::{BathSpec, PiChoice, RateModel, DEFAULT_PUMP_FRACTION, WEAK_PUMP_LIMIT};
pub use liouvillian::{
    build_liouvillian, gme_dissipator, gme_dissipator_with, pump_dissipator, unvectorize, vec_index,
    vectorize, Liouvillian,
};
pub use steady::{steady_state, steady_state_with, DensityMatrix};
pub use transitions::{dressed_transitions, Transition, TransitionSet};

use crate::error::{Result, Stage, StageExt};
use crate::models::{dressed_states, ModelParams};
use crate::numeric::NumericPolicy;
use crate::operators::EigenSystem;

/// Default number of dressed states kept in the master equation.
pub const DEFAULT_DRESSED_DIM: usize = 15;

/// Relative size below which a transition matrix element counts as zero when
/// deciding which dressed states the bath can reach.
pub const REACHABILITY_TOL: f64 = 1e-12;

/// Everything the quantum spectrum needs for one (model, bath) pair.
#[derive(Debug, Clone)]
pub struct OpenSystem {
    pub eigen: EigenSystem,
    pub transitions: TransitionSet,
    pub liouvillian: Liouvillian,
    pub steady_state: DensityMatrix,
}

impl OpenSystem {
    /// Diagonalises the model, keeps `dressed_dim` states and solves for the
    /// steady state.
    ///
    /// Kept states that no chain of bath transitions connects to the ground
    /// state (e.g. matter excitations at zero coupling) can never be populated
    /// and would make the steady state non-unique; they are dropped with a
    /// warning.
    pub fn assemble(model: &ModelParams, bath: &BathSpec, dressed_dim: usize) -> Result<Self> {
        let eigen = dressed_states(model).stage(Stage::Eigensystem)?;
        Self::from_eigen(eigen, model, bath, dressed_dim, &NumericPolicy::default())
    }

    /// As [`assemble`](Self::assemble) with a precomputed eigensystem, so
    /// that several baths can share one diagonalisation.
    pub fn from_eigen(
        eigen: EigenSystem,
        model: &ModelParams,
        bath: &BathSpec,
        dressed_dim: usize,
        policy: &NumericPolicy,
    ) -> Result<Self> {
        bath.validate()?;
        let pi = bath.coupling_operator(model).stage(Stage::Transitions)?;
        let mut transitions =
            dressed_transitions(&eigen, &pi, dressed_dim, policy.degeneracy).stage(Stage::Transitions)?;
        let reachable = transitions.reachable_states(REACHABILITY_TOL);
        if reachable.len() < transitions.dim() {
            log::warn!(
                "{} of {} dressed states are not coupled to the bath from the ground state; dropping them",
                transitions.dim() - reachable.len(),
                transitions.dim()
            );
            transitions = transitions.restrict(&reachable).stage(Stage::Transitions)?;
        }
        let loss = gme_dissipator_with(&transitions, bath, policy).stage(Stage::Liouvillian)?;
        let pump = pump_dissipator(&transitions, bath);
        let liouvillian = build_liouvillian(transitions.energies(), &[loss, pump]).stage(Stage::Liouvillian)?;
        let defect = liouvillian.trace_defect();
        if defect > policy.trace_preservation {
            return Err(crate::Error::SelfCheck {
                check: "Liouvillian trace preservation",
                deviation: defect,
            })
            .stage(Stage::Liouvillian);
        }
        let steady_state = steady_state_with(&liouvillian, policy).stage(Stage::SteadyState)?;
        Ok(Self {
            eigen,
            transitions,
            liouvillian,
            steady_state,
        })
    }
}
