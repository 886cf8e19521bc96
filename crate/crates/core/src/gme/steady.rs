use crate::error::{Error, Result};
use crate::numeric::NumericPolicy;
use crate::operators::{hermitian_eig, solve_linear_with, ComplexMatrix, LuFactors, C64};

use super::liouvillian::{unvectorize, vec_index, Liouvillian};

/// Normalised, Hermitian steady state in the dressed basis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    rho: ComplexMatrix,
    /// `max|ρ − ρ†|` of the raw solution before symmetrisation.
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.rho.diagonal().iter().map(|z| z.re).collect()
    }

    /// `Tr(ρ O)`.
    pub fn expectation(&self, o: &ComplexMatrix) -> Result<C64> {
        o.check_dim(self.dim(), "DensityMatrix::expectation")?;
        Ok((&self.rho * o).trace())
    }
}

pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    steady_state_with(l, &NumericPolicy::default())
}

/// Unique stationary state of `l`.
///
/// The kernel must be one-dimensional (second-smallest `|λ|` above
/// `policy.kernel_gap` times the smallest). The state is obtained by replacing
/// the first row of `L vec ρ = 0` with the trace condition; if that system is
/// rejected as ill-conditioned, inverse iteration on `L` is used instead.
pub fn steady_state_with(l: &Liouvillian, policy: &NumericPolicy) -> Result<DensityMatrix> {
    let k = l.dim();
    let n = k * k;
    let mut mags: Vec<f64> = l.eigenvalues()?.iter().map(|z| z.norm()).collect();
    mags.sort_by(f64::total_cmp);
    let (smallest, second) = (mags[0], mags[1]);
    if !(second > policy.kernel_gap * smallest) {
        return Err(Error::DegenerateKernel { smallest, second });
    }

    let mut system = l.matrix().clone();
    for col in 0..n {
        system[(0, col)] = C64::new(0.0, 0.0);
    }
    for a in 0..k {
        system[(0, vec_index(a, a, k))] = C64::new(1.0, 0.0);
    }
    let mut rhs = vec![C64::new(0.0, 0.0); n];
    rhs[0] = C64::new(1.0, 0.0);
    let v = match solve_linear_with(&system, &rhs, policy) {
        Ok(sol) => sol.x,
        Err(Error::Singular { condition }) => {
            log::warn!("trace-row steady-state system rejected (condition {condition:e}); using inverse iteration");
            inverse_iteration(l, smallest)?
        }
        Err(e) => return Err(e),
    };
    finish(unvectorize(&v, k)?, policy)
}

fn inverse_iteration(l: &Liouvillian, smallest: f64) -> Result<Vec<C64>> {
    let n = l.matrix().dim();
    let shift = (1e-8 * l.matrix().max_abs()).max(10.0 * smallest);
    let shifted = l.matrix() - &ComplexMatrix::identity(n).scale(C64::new(shift, 0.0));
    let lu = LuFactors::new(&shifted);
    let mut x = vec![C64::new(1.0, 0.0); n];
    for _ in 0..4 {
        x = lu.solve(&x);
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Singular { condition: f64::INFINITY });
        }
        x.iter_mut().for_each(|z| *z /= norm);
    }
    Ok(x)
}

fn finish(raw: ComplexMatrix, policy: &NumericPolicy) -> Result<DensityMatrix> {
    let hermiticity_defect = raw.hermiticity_error();
    if hermiticity_defect > 1e-10 * raw.max_abs() {
        log::debug!("steady state symmetrised; raw max|rho - rho^H| = {hermiticity_defect:e}");
    }
    let sym = (&raw + &raw.adjoint()).scale(C64::new(0.5, 0.0));
    let trace = sym.trace().re;
    if !(trace.is_finite() && trace.abs() > 0.0) {
        return Err(Error::NegativeState { min_eigenvalue: f64::NAN });
    }
    let rho = sym.scale(C64::new(1.0 / trace, 0.0));
    let min_eigenvalue = hermitian_eig(&rho)?.values()[0];
    if min_eigenvalue < -policy.positivity {
        return Err(Error::NegativeState { min_eigenvalue });
    }
    Ok(DensityMatrix {
        rho,
        hermiticity_defect,
        min_eigenvalue,
    })
}
