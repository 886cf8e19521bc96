use super::params::{Gauge, ModelKind, ModelParams};
use crate::error::{Error, Result};
use crate::numeric::NumericPolicy;
use crate::operators::{
    annihilation, check_hermitian, hermitian_eig, hermitian_eigenvalues, pauli_y, pauli_z, tls_lowering,
    ComplexMatrix, EigenSystem, MatterKind, C64,
};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// System Hamiltonian on `p.space`, constant offsets included.
///
/// | model    | dipole gauge                                   | Coulomb gauge                                             |
/// |----------|------------------------------------------------|-----------------------------------------------------------|
/// | Hopfield | `ωc a†a + ω0 b†b + ig(a†−a)(b+b†) + D(b+b†)²`  | `ωc a†a + ω0 b†b + ig(ω0/ωc)(b†−b)(a+a†) + D(a+a†)²`      |
/// | Rabi     | `ωc a†a + ω0 σ+σ− + ig(a†−a)σx`                | `ωc a†a + (ω0/2)[σz cos 2η(a+a†) + σy sin 2η(a+a†)]`       |
///
/// `D` is the same in both gauges. The Coulomb-gauge Rabi field functions are
/// evaluated by spectral decomposition of `2η(a+a†)` on the truncated cavity,
/// so they mix the highest Fock states and need convergence checks in `N_c`.
pub fn build_hamiltonian(p: &ModelParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let space = p.space;
    let nc = space.cavity_dim();
    let id_c = ComplexMatrix::identity(nc);
    let id_m = ComplexMatrix::identity(space.matter_dim());
    let a = annihilation(nc)?;
    let ad = a.adjoint();
    let s = match space.matter() {
        MatterKind::Boson(n) => annihilation(n)?,
        MatterKind::TwoLevel => tls_lowering(),
    };
    let sd = s.adjoint();
    let x = &s + &sd;
    let (g, d) = (p.g(), p.d());

    // Every term is a single cavity ⊗ matter product; factor products stay
    // on the small factor spaces.
    let mut h = space.product(&(&ad * &a).scale(re(p.omega_c)), &id_m)?;
    match (p.model, p.gauge) {
        (ModelKind::Hopfield, Gauge::Dipole) => {
            h += &space.product(&id_c, &(&sd * &s).scale(re(p.omega_0)))?;
            h += &space.product(&(&ad - &a).scale(im(g)), &x)?;
            h += &space.product(&id_c, &(&x * &x).scale(re(d)))?;
        }
        (ModelKind::Hopfield, Gauge::Coulomb) => {
            let q = &a + &ad;
            h += &space.product(&id_c, &(&sd * &s).scale(re(p.omega_0)))?;
            h += &space.product(&q.scale(im(g * p.omega_0 / p.omega_c)), &(&sd - &s))?;
            h += &space.product(&(&q * &q).scale(re(d)), &id_m)?;
        }
        (ModelKind::Rabi, Gauge::Dipole) => {
            h += &space.product(&id_c, &(&sd * &s).scale(re(p.omega_0)))?;
            h += &space.product(&(&ad - &a).scale(im(g)), &x)?;
        }
        (ModelKind::Rabi, Gauge::Coulomb) => {
            let phase = (&a + &ad).scale(re(2.0 * p.eta));
            let eig = hermitian_eig(&phase)?;
            let half = re(0.5 * p.omega_0);
            h += &space.product(&eig.apply(f64::cos).scale(half), &pauli_z())?;
            h += &space.product(&eig.apply(f64::sin).scale(half), &pauli_y())?;
        }
    }
    check_hermitian(&h, &NumericPolicy::default())?;
    Ok(h)
}

/// Both Hamiltonians of both models conserve the total excitation parity
/// `(−1)^(n_c + n_m)`; returns the two sector index lists when every element
/// of `h` between them is at roundoff level. The Coulomb-gauge Rabi field
/// functions come out of an eigendecomposition and carry such residue.
fn parity_blocks(p: &ModelParams, h: &ComplexMatrix) -> Option<[Vec<usize>; 2]> {
    let floor = 64.0 * f64::EPSILON * h.max_abs();
    let sectors = p.space.parity_sectors();
    let [even, odd] = &sectors;
    let mixed = even.iter().any(|&i| odd.iter().any(|&j| h[(i, j)].norm() > floor));
    (!mixed).then_some(sectors)
}

fn sub_block(h: &ComplexMatrix, idx: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(idx.len(), |i, j| h[(idx[i], idx[j])])
}

/// Diagonalises [`build_hamiltonian`] sector by sector and checks each
/// decomposition.
pub fn dressed_states(p: &ModelParams) -> Result<EigenSystem> {
    let policy = NumericPolicy::default();
    let h = build_hamiltonian(p)?;
    let Some(sectors) = parity_blocks(p, &h) else {
        let eig = hermitian_eig(&h)?;
        eig.verify(&h, &policy)?;
        return Ok(eig);
    };
    let mut blocks = Vec::with_capacity(2);
    for idx in sectors {
        let block = sub_block(&h, &idx);
        let eig = hermitian_eig(&block)?;
        eig.verify(&block, &policy)?;
        blocks.push((idx, eig));
    }
    Ok(EigenSystem::from_blocks(h.dim(), blocks))
}

/// Eigenvalues of [`build_hamiltonian`], ascending, without eigenvectors.
///
/// Checked through the first two moments: `Σλ = tr H` and
/// `Σλ² = ‖H‖²_F`, relative to `policy.reconstruction`.
pub fn energy_levels(p: &ModelParams) -> Result<Vec<f64>> {
    let policy = NumericPolicy::default();
    let h = build_hamiltonian(p)?;
    let sectors = parity_blocks(p, &h).map_or_else(|| vec![(0..h.dim()).collect()], Vec::from);
    let mut values = Vec::with_capacity(h.dim());
    for idx in sectors {
        let block = sub_block(&h, &idx);
        let v = hermitian_eigenvalues(&block)?;
        let trace = block.trace().re;
        let frob: f64 = (0..block.dim())
            .flat_map(|i| (0..block.dim()).map(move |j| (i, j)))
            .map(|(i, j)| block[(i, j)].norm_sqr())
            .sum();
        let first = (v.iter().sum::<f64>() - trace).abs() / frob.sqrt().max(1.0) / block.dim() as f64;
        let second = (v.iter().map(|x| x * x).sum::<f64>() - frob).abs() / frob.max(1.0);
        for (check, deviation) in [("eigenvalue sum vs trace", first), ("eigenvalue squares vs Frobenius norm", second)] {
            if deviation > policy.reconstruction {
                return Err(Error::SelfCheck { check, deviation });
            }
        }
        values.extend(v);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}
