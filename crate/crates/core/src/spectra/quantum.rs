use rayon::prelude::*;

use super::spectrum::{Grid, Spectrum};
use crate::error::{Error, Result};
use crate::gme::{vectorize, DensityMatrix, Liouvillian, OpenSystem, TransitionSet};
use crate::numeric::NumericPolicy;
use crate::operators::{ShiftedSolver, C64};

/// Stationary cavity emission `S(ω) = Re ∫₀^∞ dτ e^{iωτ} ⟨X⁻(0) X⁺(τ)⟩`.
///
/// By quantum regression the correlation is `Tr[X⁺ e^{Lτ}(ρ X⁻)]`, so
///
/// `S(ω) = −Re lᵀ (L + iω)⁻¹ b`,  `lᵀy = Tr(X⁺ Y)`,  `b = vec(ρ X⁻)`,
///
/// with the stationary component `Tr(ρX⁻) vec ρ` removed from `b` first.
/// `L` is reduced to Hessenberg form once and each frequency costs one
/// `O(K⁴)` solve.
pub fn emission_spectrum(
    l: &Liouvillian,
    t: &TransitionSet,
    rho: &DensityMatrix,
    grid: &Grid,
) -> Result<Spectrum> {
    emission_spectrum_with(l, t, rho, grid, &NumericPolicy::default())
}

pub fn emission_spectrum_with(
    l: &Liouvillian,
    t: &TransitionSet,
    rho: &DensityMatrix,
    grid: &Grid,
    policy: &NumericPolicy,
) -> Result<Spectrum> {
    let k = l.dim();
    if t.dim() != k || rho.dim() != k {
        return Err(Error::Dimension {
            context: "emission_spectrum: dressed dimensions of L, X and rho",
            expected: k,
            found: if t.dim() != k { t.dim() } else { rho.dim() },
        });
    }
    let xm = t.x_minus();
    let rho_xm = rho.matrix() * &xm;
    let mean = rho_xm.trace();
    let mut b = vectorize(&rho_xm);
    for (bi, ri) in b.iter_mut().zip(vectorize(rho.matrix())) {
        *bi -= mean * ri;
    }
    let residual_trace: C64 = (0..k).map(|a| b[a + k * a]).sum();
    if residual_trace.norm() > 1e-10 * rho_xm.max_abs().max(f64::MIN_POSITIVE) {
        return Err(Error::SelfCheck {
            check: "stationary-mode deflation",
            deviation: residual_trace.norm(),
        });
    }
    let left = vectorize(&t.x_plus().transpose());

    let solver = ShiftedSolver::new(l.matrix())?;
    let b_frame = solver.to_frame(&b);
    let l_frame = solver.left_to_frame(&left);
    let samples = grid
        .points()
        .par_iter()
        .map(|&omega| {
            let y = solver
                .solve_in_frame(C64::new(0.0, omega), &b_frame)
                .map_err(|pivot| Error::Resolvent {
                    omega,
                    diagnostic: format!(
                        "relative pivot {pivot:e}: frequency coincides with an undamped mode of the Liouvillian"
                    ),
                })?;
            let value: C64 = l_frame.iter().zip(&y).map(|(p, q)| p * q).sum();
            Ok(-value.re)
        })
        .collect::<Result<Vec<f64>>>()?;
    Spectrum::from_samples(grid.clone(), samples, policy.negative_spectrum)
}

/// [`emission_spectrum`] of an assembled open system.
pub fn quantum_spectrum(system: &OpenSystem, grid: &Grid) -> Result<Spectrum> {
    emission_spectrum(&system.liouvillian, &system.transitions, &system.steady_state, grid)
}
