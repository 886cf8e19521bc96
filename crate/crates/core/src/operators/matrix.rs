use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use faer::Mat;

use super::C64;
use crate::error::{Error, Result};

/// Dense square complex matrix.
///
/// Every operator in the crate (ladder operators, Hamiltonians, dressed
/// transition operators, Liouvillian superoperators) is stored this way.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(Mat<C64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(Mat::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Mat::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(Mat::from_fn(dim, dim, |i, j| f(i, j)))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from rows given in reading order.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension {
                context: "from_rows",
                expected: 1,
                found: 0,
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension {
                context: "from_rows",
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn from_faer(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::Dimension {
                context: "square matrix",
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        Ok(Self(mat))
    }

    pub fn as_faer(&self) -> &Mat<C64> {
        &self.0
    }

    pub fn into_faer(self) -> Mat<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint().to_owned())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose().to_owned())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.conjugate().to_owned())
    }

    pub fn scale(&self, factor: C64) -> Self {
        let n = self.dim();
        Self::from_fn(n, |i, j| self[(i, j)] * factor)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let (n, m) = (self.dim(), other.dim());
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * other[(i % m, j % m)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self[(i, i)]).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim()).map(|i| self[(i, j)]).collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut best = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                best = best.max(self[(i, j)].norm());
            }
        }
        best
    }

    /// `max|A - A^H|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max|A - B|`; the dimensions must agree.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff dimension mismatch");
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max((self[(i, j)] - other[(i, j)]).norm());
            }
        }
        worst
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim(), v.len(), "mul_vec dimension mismatch");
        let n = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (j, &vj) in v.iter().enumerate() {
            if vj == C64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self[(i, j)] * vj;
            }
        }
        out
    }

    /// Square sub-block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        Self::from_fn(size, |i, j| self[(row + i, col + j)])
    }

    pub(crate) fn check_dim(&self, expected: usize, context: &'static str) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::Dimension {
                context,
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[(i, j)]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[(i, j)]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix product dimension mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix sum dimension mismatch");
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix difference dimension mismatch");
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim(), rhs.dim(), "matrix sum dimension mismatch");
        self.0 += &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_follows_block_layout() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
            .unwrap();
        let id = ComplexMatrix::identity(2);
        let k = a.kron(&id);
        assert_eq!(k[(0, 2)], c(2.0, 0.0));
        assert_eq!(k[(1, 3)], c(2.0, 0.0));
        assert_eq!(k[(2, 0)], c(0.0, 1.0));
        assert_eq!(k[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn hermiticity_error_detects_asymmetry() {
        let mut m = ComplexMatrix::identity(3);
        assert_eq!(m.hermiticity_error(), 0.0);
        m[(0, 2)] = c(0.0, 1.0);
        m[(2, 0)] = c(0.0, 1.0);
        assert!((m.hermiticity_error() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let err = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![]]).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }

    #[test]
    fn mul_vec_matches_matrix_product() {
        let m = ComplexMatrix::from_fn(3, |i, j| c(i as f64, j as f64));
        let v = vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, -1.0)];
        let out = m.mul_vec(&v);
        for i in 0..3 {
            let direct: C64 = (0..3).map(|j| m[(i, j)] * v[j]).sum();
            assert!((out[i] - direct).norm() < 1e-14);
        }
    }
}
