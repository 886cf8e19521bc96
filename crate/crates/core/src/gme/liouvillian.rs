use crate::error::{Error, Result};
use crate::numeric::NumericPolicy;
use crate::operators::{eigenvalues, ComplexMatrix, C64};

use super::bath::BathSpec;
use super::transitions::TransitionSet;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Column-stacking index of `ρ[(row, col)]` in `vec ρ`.
pub fn vec_index(row: usize, col: usize, dim: usize) -> usize {
    row + dim * col
}

pub fn vectorize(rho: &ComplexMatrix) -> Vec<C64> {
    let k = rho.dim();
    let mut out = vec![ZERO; k * k];
    for col in 0..k {
        for row in 0..k {
            out[vec_index(row, col, k)] = rho[(row, col)];
        }
    }
    out
}

pub fn unvectorize(v: &[C64], dim: usize) -> Result<ComplexMatrix> {
    if v.len() != dim * dim {
        return Err(Error::Dimension {
            context: "unvectorize",
            expected: dim * dim,
            found: v.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(dim, |row, col| v[vec_index(row, col, dim)]))
}

/// Superoperator on `K × K` density matrices, acting on column-stacked
/// vectors: `vec(AρB) = (Bᵀ ⊗ A) vec ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Liouvillian {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::zeros(dim * dim),
        }
    }

    /// `ρ ↦ A ρ B`.
    pub fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        Self {
            dim: a.dim(),
            matrix: b.transpose().kron(a),
        }
    }

    /// `ρ ↦ A ρ`.
    pub fn left(a: &ComplexMatrix) -> Self {
        Self::sandwich(a, &ComplexMatrix::identity(a.dim()))
    }

    /// `ρ ↦ ρ B`.
    pub fn right(b: &ComplexMatrix) -> Self {
        Self::sandwich(&ComplexMatrix::identity(b.dim()), b)
    }

    /// `D[O]ρ = 2OρO† − ρO†O − O†Oρ`.
    pub fn lindblad(o: &ComplexMatrix) -> Self {
        let od = o.adjoint();
        let odo = &od * o;
        let mut l = Self::sandwich(o, &od).scaled(2.0);
        l.add_scaled(&Self::left(&odo), -1.0);
        l.add_scaled(&Self::right(&odo), -1.0);
        l
    }

    /// `ρ ↦ −i[diag(energies), ρ]`.
    pub fn hamiltonian(energies: &[f64]) -> Self {
        let k = energies.len();
        let mut l = Self::zeros(k);
        for col in 0..k {
            for row in 0..k {
                let i = vec_index(row, col, k);
                l.matrix[(i, i)] = C64::new(0.0, -(energies[row] - energies[col]));
            }
        }
        l
    }

    /// Dressed-state dimension `K`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.matrix = &self.matrix * factor;
        self
    }

    pub fn add_scaled(&mut self, other: &Liouvillian, factor: f64) {
        self.matrix += &(&other.matrix * factor);
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        rho.check_dim(self.dim, "Liouvillian::apply")?;
        unvectorize(&self.matrix.mul_vec(&vectorize(rho)), self.dim)
    }

    /// `max |1ᵀ L|`, with `1 = vec I`.
    pub fn trace_defect(&self) -> f64 {
        let k = self.dim;
        let n = k * k;
        (0..n)
            .map(|col| (0..k).map(|a| self.matrix[(vec_index(a, a, k), col)]).sum::<C64>().norm())
            .fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        eigenvalues(&self.matrix)
    }

    /// Trace preservation and stability of the spectrum.
    pub fn check_invariants(&self, policy: &NumericPolicy) -> Result<()> {
        let defect = self.trace_defect();
        if defect > policy.trace_preservation {
            return Err(Error::SelfCheck {
                check: "Liouvillian trace preservation",
                deviation: defect,
            });
        }
        let max_re = self.eigenvalues()?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        if max_re > policy.stability {
            return Err(Error::SelfCheck {
                check: "Liouvillian stability",
                deviation: max_re,
            });
        }
        Ok(())
    }
}

/// Non-secular cavity dissipator, evaluated as the explicit double sum over
/// transition pairs `(ω, ω′)`:
///
/// `½ Σ Γ(ω)[X⁺(ω)ρX⁻(ω′) − X⁻(ω′)X⁺(ω)ρ] + Γ(ω′)[X⁺(ω)ρX⁻(ω′) − ρX⁻(ω′)X⁺(ω)]`.
///
/// For a flat rate this collapses to `(κ/2)(2X⁺ρX⁻ − X⁻X⁺ρ − ρX⁻X⁺)`, which
/// is asserted to `policy.dissipator_self_check`.
pub fn gme_dissipator(t: &TransitionSet, bath: &BathSpec) -> Result<Liouvillian> {
    gme_dissipator_with(t, bath, &NumericPolicy::default())
}

pub fn gme_dissipator_with(t: &TransitionSet, bath: &BathSpec, policy: &NumericPolicy) -> Result<Liouvillian> {
    let k = t.dim();
    let mut l = Liouvillian::zeros(k);
    if t.is_empty() {
        log::warn!("no dressed transitions retained; cavity dissipator is zero");
        return Ok(l);
    }
    let m = &mut l.matrix;
    for s in t.transitions() {
        let gamma = bath.rate(s.omega);
        for sp in t.transitions() {
            let gamma_p = bath.rate(sp.omega);
            // X⁺(ω) = e|j⟩⟨k|, X⁻(ω′) = ē′|k′⟩⟨j′|.
            let prod = s.matrix_element * sp.matrix_element.conj();
            // X⁺ρX⁻′ : ρ(k, k′) → (j, j′).
            m[(vec_index(s.j, sp.j, k), vec_index(s.k, sp.k, k))] += prod * (0.5 * (gamma + gamma_p));
            if s.j == sp.j {
                // X⁻′X⁺ = prod |k′⟩⟨k|.
                for c in 0..k {
                    m[(vec_index(sp.k, c, k), vec_index(s.k, c, k))] -= prod * (0.5 * gamma);
                    m[(vec_index(c, s.k, k), vec_index(c, sp.k, k))] -= prod * (0.5 * gamma_p);
                }
            }
        }
    }

    let xp = t.x_plus();
    let xm = t.x_minus();
    let xmxp = &xm * xp;
    let mut collapsed = Liouvillian::sandwich(xp, &xm).scaled(2.0);
    collapsed.add_scaled(&Liouvillian::left(&xmxp), -1.0);
    collapsed.add_scaled(&Liouvillian::right(&xmxp), -1.0);
    let collapsed = collapsed.scaled(0.5 * bath.kappa);
    let deviation = l.matrix.max_abs_diff(&collapsed.matrix);
    if deviation > policy.dissipator_self_check * collapsed.matrix.max_abs().max(1.0) {
        return Err(Error::SelfCheck {
            check: "double-sum dissipator vs collapsed form",
            deviation,
        });
    }
    Ok(l)
}

/// Incoherent pump `(P_c/2) D[X⁻]`.
pub fn pump_dissipator(t: &TransitionSet, bath: &BathSpec) -> Liouvillian {
    if bath.pump == 0.0 {
        return Liouvillian::zeros(t.dim());
    }
    Liouvillian::lindblad(&t.x_minus()).scaled(0.5 * bath.pump)
}

/// `L = −i[H, ·] + Σ dissipators` in the dressed basis.
pub fn build_liouvillian(energies: &[f64], dissipators: &[Liouvillian]) -> Result<Liouvillian> {
    let mut l = Liouvillian::hamiltonian(energies);
    for d in dissipators {
        if d.dim != l.dim {
            return Err(Error::Dimension {
                context: "build_liouvillian: dissipator vs dressed basis",
                expected: l.dim,
                found: d.dim,
            });
        }
        l.add_scaled(d, 1.0);
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gme::{dressed_transitions, PiChoice};
    use crate::models::{dressed_states, ModelParams};
    use crate::operators::{annihilation, EigenSystem};

    fn bare_transitions(n: usize, pi: PiChoice) -> TransitionSet {
        let eig = EigenSystem::from_parts((0..n).map(|m| m as f64).collect(), ComplexMatrix::identity(n)).unwrap();
        dressed_transitions(&eig, &pi.operator(&annihilation(n).unwrap()), n, 1e-9).unwrap()
    }

    fn hopfield_transitions(pi: PiChoice) -> TransitionSet {
        let p = ModelParams::hopfield(0.5, 12, 12).unwrap();
        let eig = dressed_states(&p).unwrap();
        let bath = BathSpec::new(pi, 0.05).unwrap();
        dressed_transitions(&eig, &bath.coupling_operator(&p).unwrap(), 12, 1e-9).unwrap()
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let rho = ComplexMatrix::from_fn(3, |r, c| C64::new(r as f64, c as f64));
        let v = vectorize(&rho);
        assert_eq!(v[1], C64::new(1.0, 0.0));
        assert_eq!(v[3], C64::new(0.0, 1.0));
        assert_eq!(unvectorize(&v, 3).unwrap(), rho);
        let a = ComplexMatrix::from_fn(3, |r, c| C64::new((r * 3 + c) as f64, 1.0));
        let b = ComplexMatrix::from_fn(3, |r, c| C64::new(1.0, (r + 2 * c) as f64));
        let direct = &(&a * &rho) * &b;
        assert_eq!(Liouvillian::sandwich(&a, &b).apply(&rho).unwrap(), direct);
    }

    #[test]
    fn bare_cavity_loss_is_photon_damping() {
        let t = bare_transitions(6, PiChoice::P);
        let bath = BathSpec::new(PiChoice::P, 0.3).unwrap();
        let d = gme_dissipator(&t, &bath).unwrap();
        let expected = Liouvillian::lindblad(&annihilation(6).unwrap()).scaled(0.15);
        assert!(d.matrix().max_abs_diff(expected.matrix()) < 1e-14);
    }

    #[test]
    fn bare_cavity_pump_raises_photons() {
        let t = bare_transitions(6, PiChoice::P);
        let bath = BathSpec::new(PiChoice::P, 0.3).unwrap().with_pump(0.01).unwrap();
        let d = pump_dissipator(&t, &bath);
        let expected = Liouvillian::lindblad(&annihilation(6).unwrap().adjoint()).scaled(0.005);
        assert!(d.matrix().max_abs_diff(expected.matrix()) < 1e-14);
        let zero = pump_dissipator(&t, &bath.with_pump(0.0).unwrap());
        assert_eq!(zero.matrix().max_abs(), 0.0);
    }

    #[test]
    fn double_sum_matches_collapsed_form_at_strong_coupling() {
        let t = hopfield_transitions(PiChoice::PplusQ);
        let bath = BathSpec::new(PiChoice::PplusQ, 0.05).unwrap();
        let strict = NumericPolicy {
            dissipator_self_check: 1e-12,
            ..NumericPolicy::default()
        };
        let d = gme_dissipator_with(&t, &bath, &strict).unwrap();
        assert!(d.trace_defect() < 1e-12);
        assert!(d.matrix().max_abs() > 0.0);
    }

    #[test]
    fn unitary_part_has_imaginary_spectrum() {
        let e = [0.0, 0.7, 1.9];
        let l = build_liouvillian(&e, &[]).unwrap();
        let mut got: Vec<f64> = l.eigenvalues().unwrap().iter().map(|z| {
            assert!(z.re.abs() < 1e-14);
            z.im
        }).collect();
        let mut want: Vec<f64> = e.iter().flat_map(|a| e.iter().map(move |b| -(a - b))).collect();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn single_photon_population_decays_at_kappa() {
        let kappa = 0.3;
        let t = bare_transitions(2, PiChoice::P);
        let bath = BathSpec::new(PiChoice::P, kappa).unwrap().with_pump(0.0).unwrap();
        let l = build_liouvillian(t.energies(), &[gme_dissipator(&t, &bath).unwrap()]).unwrap();
        let ev = l.eigenvalues().unwrap();
        // Real modes: the steady state (0) and the population decay (−κ).
        let real: Vec<f64> = ev.iter().filter(|z| z.im.abs() < 1e-12).map(|z| z.re).collect();
        assert!(real.iter().any(|&r| (r + kappa).abs() < 1e-12), "{ev:?}");
        assert!(real.iter().any(|&r| r.abs() < 1e-12));
    }

    #[test]
    fn strong_coupling_liouvillian_is_stable_and_trace_preserving() {
        let t = hopfield_transitions(PiChoice::PplusQ);
        let bath = BathSpec::new(PiChoice::PplusQ, 0.05).unwrap();
        let l = build_liouvillian(
            t.energies(),
            &[gme_dissipator(&t, &bath).unwrap(), pump_dissipator(&t, &bath)],
        )
        .unwrap();
        l.check_invariants(&NumericPolicy::default()).unwrap();
    }

    #[test]
    fn quadrature_dissipators_are_not_additive() {
        let bath = BathSpec::new(PiChoice::PplusQ, 0.05).unwrap();
        let joint = gme_dissipator(&hopfield_transitions(PiChoice::PplusQ), &bath).unwrap();
        let mut split = gme_dissipator(&hopfield_transitions(PiChoice::P), &bath).unwrap().scaled(0.5);
        split.add_scaled(&gme_dissipator(&hopfield_transitions(PiChoice::Q), &bath).unwrap(), 0.5);
        assert!(joint.matrix().max_abs_diff(split.matrix()) > 1e-3);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = build_liouvillian(&[0.0, 1.0], &[Liouvillian::zeros(3)]).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }
}
