use super::params::{Gauge, ModelParams};
use crate::error::Result;
use crate::operators::{ComplexMatrix, C64};

/// Cavity operators of one model in the composite space.
///
/// Unprimed operators use the bare `a`; primed ones use the gauge-corrected
/// `a' = a + iη σx`, with `σx = b + b†` for the Hopfield model and
/// `σ+ + σ−` for the Rabi model.
#[derive(Debug, Clone)]
pub struct CavityQuadratures {
    pub a: ComplexMatrix,
    pub a_prime: ComplexMatrix,
    /// `i(a† − a)`.
    pub p: ComplexMatrix,
    /// `a + a†`.
    pub q: ComplexMatrix,
    pub p_prime: ComplexMatrix,
    pub q_prime: ComplexMatrix,
}

/// `a' = a + iη σx` on the full space.
pub fn gauge_corrected_cavity_op(p: &ModelParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let a = p.space.cavity_annihilation();
    let s = p.space.matter_lowering();
    let x = &s + &s.adjoint();
    Ok(&a + &x.scale(C64::new(0.0, p.eta)))
}

fn quadratures_of(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let ad = a.adjoint();
    ((&ad - a).scale(C64::new(0.0, 1.0)), a + &ad)
}

pub fn cavity_quadratures(p: &ModelParams) -> Result<CavityQuadratures> {
    let a_prime = gauge_corrected_cavity_op(p)?;
    let a = p.space.cavity_annihilation();
    let (pq, qq) = quadratures_of(&a);
    let (pp, qp) = quadratures_of(&a_prime);
    Ok(CavityQuadratures {
        a,
        a_prime,
        p: pq,
        q: qq,
        p_prime: pp,
        q_prime: qp,
    })
}

/// The cavity operator that couples to the outside world.
///
/// In the dipole gauge the physical field is `a'` when `gauge_corrected` is
/// set and the bare `a` otherwise. In the Coulomb gauge the bare `a` already
/// is the physical field, so the flag has no effect there.
pub fn physical_cavity_op(p: &ModelParams, gauge_corrected: bool) -> Result<ComplexMatrix> {
    match (p.gauge, gauge_corrected) {
        (Gauge::Dipole, true) => gauge_corrected_cavity_op(p),
        _ => {
            p.validate()?;
            Ok(p.space.cavity_annihilation())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{hermitian_eig, HilbertSpace};

    /// `U = exp(-iηQσx)` from the spectral decomposition of the Hermitian
    /// generator `ηQσx`.
    fn unitary(p: &ModelParams) -> ComplexMatrix {
        let a = p.space.cavity_annihilation();
        let s = p.space.matter_lowering();
        let gen = &(&a + &a.adjoint()) * &(&s + &s.adjoint());
        let eig = hermitian_eig(&gen.scale(C64::new(p.eta, 0.0))).unwrap();
        let cos = eig.apply(f64::cos);
        let sin = eig.apply(f64::sin);
        &cos - &sin.scale(C64::new(0.0, 1.0))
    }

    /// Largest deviation over matrix elements between product states with
    /// at most `cut` cavity quanta (and matter quanta, for a boson).
    fn low_block_diff(x: &ComplexMatrix, y: &ComplexMatrix, space: &HilbertSpace, cut: usize) -> f64 {
        let m = space.matter_dim();
        let keep: Vec<usize> = (0..space.total_dim())
            .filter(|i| i / m <= cut && (m == 2 || i % m <= cut))
            .collect();
        let mut worst = 0.0f64;
        for &i in &keep {
            for &j in &keep {
                worst = worst.max((x[(i, j)] - y[(i, j)]).norm());
            }
        }
        worst
    }

    #[test]
    fn zero_coupling_leaves_a_unchanged() {
        let p = ModelParams::hopfield(0.0, 5, 4).unwrap();
        let q = cavity_quadratures(&p).unwrap();
        assert_eq!(q.a_prime, q.a);
    }

    #[test]
    fn matches_unitary_conjugation_rabi() {
        let p = ModelParams::rabi(0.5, 40).unwrap();
        let u = unitary(&p);
        let conj = &(&u * &p.space.cavity_annihilation()) * &u.adjoint();
        let corrected = gauge_corrected_cavity_op(&p).unwrap();
        assert!(low_block_diff(&conj, &corrected, &p.space, 10) < 1e-10);
    }

    #[test]
    fn matches_unitary_conjugation_hopfield() {
        let p = ModelParams::hopfield(0.3, 24, 24).unwrap();
        let u = unitary(&p);
        let conj = &(&u * &p.space.cavity_annihilation()) * &u.adjoint();
        let corrected = gauge_corrected_cavity_op(&p).unwrap();
        assert!(low_block_diff(&conj, &corrected, &p.space, 4) < 1e-8);
    }

    #[test]
    fn number_operator_shift() {
        // a'†a' − a†a = iη(a†σx − σx a) + η²σx².
        let p = ModelParams::hopfield(0.4, 6, 5).unwrap();
        let q = cavity_quadratures(&p).unwrap();
        let s = p.space.matter_lowering();
        let x = &s + &s.adjoint();
        let lhs = &(&q.a_prime.adjoint() * &q.a_prime) - &(&q.a.adjoint() * &q.a);
        let cross = (&(&q.a.adjoint() * &x) - &(&x * &q.a)).scale(C64::new(0.0, 0.4));
        let rhs = &cross + &(&x * &x).scale(C64::new(0.16, 0.0));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn q_is_invariant_and_p_shifts() {
        for p in [ModelParams::hopfield(0.5, 6, 6).unwrap(), ModelParams::rabi(0.5, 8).unwrap()] {
            let q = cavity_quadratures(&p).unwrap();
            assert!(q.q_prime.max_abs_diff(&q.q) <= 1e-12);
            let s = p.space.matter_lowering();
            let shift = (&s + &s.adjoint()).scale(C64::new(2.0 * p.eta, 0.0));
            assert!(q.p_prime.max_abs_diff(&(&q.p + &shift)) <= 1e-12);
        }
    }

    #[test]
    fn physical_operator_by_gauge() {
        let p = ModelParams::rabi(0.2, 5).unwrap();
        let a = p.space.cavity_annihilation();
        assert_ne!(physical_cavity_op(&p, true).unwrap(), a);
        assert_eq!(physical_cavity_op(&p, false).unwrap(), a);
        let c = p.with_gauge(Gauge::Coulomb);
        assert_eq!(physical_cavity_op(&c, true).unwrap(), a);
    }
}
