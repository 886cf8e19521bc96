use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Bosonic annihilation operator on the lowest `n` Fock states.
pub fn annihilation(n: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::Dimension {
            context: "Fock truncation (need at least 2 states)",
            expected: 2,
            found: n,
        });
    }
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n - 1 {
        a[(i, i + 1)] = C64::new(((i + 1) as f64).sqrt(), 0.0);
    }
    Ok(a)
}

/// Two-level lowering operator `σ⁻` in the basis (|g⟩, |e⟩).
pub fn tls_lowering() -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(2);
    s[(0, 1)] = C64::new(1.0, 0.0);
    s
}

/// Pauli operators of the two-level system in the (|g⟩, |e⟩) basis, built
/// from `σ⁻` so that `σ⁺ = (σx + iσy)/2` and `σz = σ⁺σ⁻ - σ⁻σ⁺`.
pub fn pauli_x() -> ComplexMatrix {
    let s = tls_lowering();
    &s + &s.adjoint()
}

pub fn pauli_y() -> ComplexMatrix {
    let s = tls_lowering();
    (&s.adjoint() - &s).scale(C64::new(0.0, -1.0))
}

pub fn pauli_z() -> ComplexMatrix {
    let s = tls_lowering();
    &(&s.adjoint() * &s) - &(&s * &s.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(n: usize, k: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[k] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn annihilation_lowers_one_photon() {
        let a = annihilation(2).unwrap();
        assert_eq!(a.mul_vec(&ket(2, 1)), ket(2, 0));
        assert_eq!(a.mul_vec(&ket(2, 0)), vec![C64::new(0.0, 0.0); 2]);
    }

    #[test]
    fn number_operator_is_diagonal_ladder() {
        let a = annihilation(3).unwrap();
        let n = &a.adjoint() * &a;
        let expected = ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 2.0]);
        assert!(n.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn commutator_is_identity_below_truncation_edge() {
        for n in [2, 5, 9] {
            let a = annihilation(n).unwrap();
            let c = a.commutator(&a.adjoint());
            let low = c.block(0, 0, n - 1);
            assert!(low.max_abs_diff(&ComplexMatrix::identity(n - 1)) < 1e-14);
            // The top Fock state carries the truncation artefact -(n-1).
            assert!((c[(n - 1, n - 1)] - C64::new(-((n - 1) as f64), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn too_small_truncation_is_an_error() {
        assert!(matches!(annihilation(1), Err(Error::Dimension { .. })));
        assert!(annihilation(0).is_err());
    }

    #[test]
    fn tls_algebra() {
        let s = tls_lowering();
        let sp = s.adjoint();
        assert_eq!(s.mul_vec(&ket(2, 1)), ket(2, 0));
        assert_eq!((&s * &s).max_abs(), 0.0);
        let anti = &(&sp * &s) + &(&s * &sp);
        assert_eq!(anti, ComplexMatrix::identity(2));
    }

    #[test]
    fn pauli_products_close_the_algebra() {
        let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
        let i = C64::new(0.0, 1.0);
        assert!((&x * &y).max_abs_diff(&z.scale(i)) < 1e-15);
        assert!((&y * &z).max_abs_diff(&x.scale(i)) < 1e-15);
        assert!((&z * &x).max_abs_diff(&y.scale(i)) < 1e-15);
        // σz = +1 on the excited state.
        assert_eq!(z[(1, 1)], C64::new(1.0, 0.0));
    }
}
