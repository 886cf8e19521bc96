use serde::Serialize;

use super::config::Resolved;
use super::pipeline::assemble_systems;
use crate::error::Result;
use crate::gme::{BathSpec, OpenSystem};
use crate::numeric::NumericPolicy;

#[derive(Debug, Clone, Serialize)]
pub struct InvariantCheck {
    pub curve: String,
    pub check: &'static str,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Open-system invariants of every quantum curve of `r`: trace
/// preservation, stability, steady-state positivity, and relaxation to the
/// dressed ground state when the pump is off. The dissipator self-check runs
/// inside assembly and fails it outright.
pub fn invariant_suite(r: &Resolved) -> Result<Vec<InvariantCheck>> {
    let policy = NumericPolicy::default();
    let mut out = Vec::new();
    for (spec, system) in assemble_systems(r)? {
        let name = spec.name.clone();
        let mut push = |check, value: f64, bound: f64, passed: bool| {
            out.push(InvariantCheck {
                curve: name.clone(),
                check,
                value,
                bound,
                passed,
            })
        };
        let defect = system.liouvillian.trace_defect();
        push("trace preservation |1^T L|", defect, policy.trace_preservation, defect <= policy.trace_preservation);
        let max_re = system
            .liouvillian
            .eigenvalues()?
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        push("stability max Re eig L", max_re, policy.stability, max_re <= policy.stability);
        let min_eig = system.steady_state.min_eigenvalue;
        push("steady-state min eigenvalue", min_eig, -policy.positivity, min_eig >= -policy.positivity);

        let crate::harness::CurveKind::Quantum { model, gauge, pi, gauge_corrected } = spec.kind else {
            continue;
        };
        let params = super::pipeline::curve_model(r, model, gauge)?;
        let dark = BathSpec {
            pi_choice: pi,
            gauge_corrected,
            kappa: r.kappa,
            pump: 0.0,
            rate_model: Default::default(),
        };
        let unpumped = OpenSystem::from_eigen(
            system.eigen.clone(),
            &params,
            &dark,
            r.dressed_dim.min(params.space.total_dim()),
            &policy,
        )?;
        let rho = unpumped.steady_state.matrix();
        let mut deviation = 0.0f64;
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                let target = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                deviation = deviation.max((rho[(i, j)].re - target).hypot(rho[(i, j)].im));
            }
        }
        push("unpumped steady state = ground projector", deviation, 1e-8, deviation <= 1e-8);
    }
    Ok(out)
}
