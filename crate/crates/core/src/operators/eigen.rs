use faer::Side;

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::numeric::NumericPolicy;

/// Eigen-decomposition `A = V diag(values) V^H` of a Hermitian operator,
/// eigenvalues ascending, eigenvectors stored as columns of `vectors`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

impl EigenSystem {
    /// Assembles a decomposition from known eigenpairs, e.g. an analytically
    /// diagonal operator. Values must ascend; columns must be orthonormal.
    pub fn from_parts(values: Vec<f64>, vectors: ComplexMatrix) -> Result<Self> {
        vectors.check_dim(values.len(), "EigenSystem::from_parts")?;
        let eig = Self { values, vectors };
        if eig.values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Eigensolver("eigenvalues not ascending".into()));
        }
        let ortho = eig.orthonormality_error();
        if ortho > NumericPolicy::default().orthonormality {
            return Err(Error::SelfCheck {
                check: "eigenvector orthonormality",
                deviation: ortho,
            });
        }
        Ok(eig)
    }

    /// Merges decompositions of the diagonal blocks of a block-diagonal
    /// operator; `blocks` pairs each block's basis indices with its
    /// decomposition. Orthonormality is inherited from the blocks.
    pub(crate) fn from_blocks(dim: usize, blocks: Vec<(Vec<usize>, EigenSystem)>) -> Self {
        let mut order: Vec<(f64, usize, usize)> = blocks
            .iter()
            .enumerate()
            .flat_map(|(b, (_, e))| e.values.iter().enumerate().map(move |(c, &v)| (v, b, c)))
            .collect();
        debug_assert_eq!(order.len(), dim);
        order.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut vectors = ComplexMatrix::zeros(dim);
        for (j, &(_, b, c)) in order.iter().enumerate() {
            let (idx, e) = &blocks[b];
            for (r, &i) in idx.iter().enumerate() {
                vectors[(i, j)] = e.vectors[(r, c)];
            }
        }
        let values = order.iter().map(|x| x.0).collect();
        Self { values, vectors }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvector `j` as a column.
    pub fn vector(&self, j: usize) -> Vec<C64> {
        self.vectors.column(j)
    }

    /// Energies measured from the lowest eigenvalue.
    pub fn excitation_energies(&self) -> Vec<f64> {
        let e0 = self.values[0];
        self.values.iter().map(|e| e - e0).collect()
    }

    /// `V f(Λ) V^H`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= fv[j];
            }
        }
        &scaled * &self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x)
    }

    /// `max|V^H V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = &self.vectors.adjoint() * &self.vectors;
        gram.max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }

    /// `max|A - V Λ V^H| / max|A|` (absolute when `A = 0`).
    pub fn reconstruction_error(&self, a: &ComplexMatrix) -> f64 {
        let scale = a.max_abs();
        let err = self.reconstruct().max_abs_diff(a);
        if scale > 0.0 {
            err / scale
        } else {
            err
        }
    }

    /// Checks the orthonormality and reconstruction invariants against `a`.
    pub fn verify(&self, a: &ComplexMatrix, policy: &NumericPolicy) -> Result<()> {
        if self.values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Eigensolver("eigenvalues not ascending".into()));
        }
        let ortho = self.orthonormality_error();
        if ortho > policy.orthonormality {
            return Err(Error::SelfCheck {
                check: "eigenvector orthonormality",
                deviation: ortho,
            });
        }
        let recon = self.reconstruction_error(a);
        if recon > policy.reconstruction {
            return Err(Error::SelfCheck {
                check: "eigen reconstruction",
                deviation: recon,
            });
        }
        Ok(())
    }
}

pub(crate) fn check_hermitian(a: &ComplexMatrix, policy: &NumericPolicy) -> Result<()> {
    let tolerance = policy.hermiticity * a.max_abs();
    let deviation = a.hermiticity_error();
    if deviation > tolerance {
        return Err(Error::NotHermitian { deviation, tolerance });
    }
    Ok(())
}

pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenSystem> {
    hermitian_eig_with(a, &NumericPolicy::default())
}

pub fn hermitian_eig_with(a: &ComplexMatrix, policy: &NumericPolicy) -> Result<EigenSystem> {
    check_hermitian(a, policy)?;
    let evd = a
        .as_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let n = a.dim();
    let raw: Vec<f64> = (0..n).map(|i| evd.S()[i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]));
    let u = evd.U();
    let vectors = ComplexMatrix::from_fn(n, |i, j| u[(i, order[j])]);
    let values = order.iter().map(|&k| raw[k]).collect();
    Ok(EigenSystem { values, vectors })
}

/// Eigenvalues of a Hermitian operator, ascending, without eigenvectors.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a, &NumericPolicy::default())?;
    let mut values: Vec<f64> = a
        .as_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Matrix functions evaluated through the spectral decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFunction {
    Cos,
    Sin,
}

impl MatrixFunction {
    fn eval(self, x: f64) -> f64 {
        match self {
            MatrixFunction::Cos => x.cos(),
            MatrixFunction::Sin => x.sin(),
        }
    }
}

/// `f(A) = V f(Λ) V^H` for Hermitian `A`.
pub fn hermitian_function(a: &ComplexMatrix, f: MatrixFunction) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(a)?.apply(|x| f.eval(x)))
}

/// Eigenvalues of a general (non-Hermitian) matrix, in no particular order.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    a.as_faer()
        .eigenvalues()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))
}
