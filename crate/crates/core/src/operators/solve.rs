use faer::dyn_stack::{MemBuffer, MemStack, StackReq};
use faer::linalg::evd::hessenberg;
use faer::linalg::householder;
use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Conj, Mat, Par};

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::numeric::NumericPolicy;

const ZERO: C64 = C64::new(0.0, 0.0);

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn norm1_matrix(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn column(v: &[C64]) -> Mat<C64> {
    Mat::from_fn(v.len(), 1, |i, _| v[i])
}

fn to_vec(m: &Mat<C64>) -> Vec<C64> {
    (0..m.nrows()).map(|i| m[(i, 0)]).collect()
}

/// Solution of a dense linear system with its diagnostics.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub x: Vec<C64>,
    /// 1-norm condition estimate `|A|_1 |A^-1|_1`.
    pub condition: f64,
    /// `|Ax - b|_2`.
    pub residual: f64,
}

/// LU factorisation kept around for repeated solves and condition estimation.
pub struct LuFactors {
    lu: PartialPivLu<C64>,
    dim: usize,
    norm1: f64,
}

impl LuFactors {
    pub fn new(a: &ComplexMatrix) -> Self {
        Self {
            lu: a.as_faer().partial_piv_lu(),
            dim: a.dim(),
            norm1: norm1_matrix(a),
        }
    }

    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        to_vec(&self.lu.solve(column(rhs)))
    }

    pub fn solve_adjoint(&self, rhs: &[C64]) -> Vec<C64> {
        to_vec(&self.lu.solve_adjoint(column(rhs)))
    }

    /// Hager's estimator of `|A^-1|_1`, times `|A|_1`.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.dim;
        let mut x = vec![C64::new(1.0 / n as f64, 0.0); n];
        let mut estimate = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x);
            if y.iter().any(|z| !z.is_finite()) {
                return f64::INFINITY;
            }
            estimate = y.iter().map(|z| z.norm()).sum::<f64>();
            let xi: Vec<C64> = y
                .iter()
                .map(|z| if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) })
                .collect();
            let z = self.solve_adjoint(&xi);
            let (jmax, zmax) = z
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.norm()))
                .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let ztx: C64 = z.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
            if zmax <= ztx.re {
                break;
            }
            x = vec![ZERO; n];
            x[jmax] = C64::new(1.0, 0.0);
        }
        estimate * self.norm1
    }
}

pub fn solve_linear(a: &ComplexMatrix, rhs: &[C64]) -> Result<LinearSolution> {
    solve_linear_with(a, rhs, &NumericPolicy::default())
}

/// Solves `A x = rhs` by partial-pivoting LU.
///
/// Fails with [`Error::Singular`] when the condition estimate exceeds the
/// policy bound or the backward error `|Ax - b| / (|A||x| + |b|)` is larger
/// than `policy.residual`.
pub fn solve_linear_with(a: &ComplexMatrix, rhs: &[C64], policy: &NumericPolicy) -> Result<LinearSolution> {
    if rhs.len() != a.dim() {
        return Err(Error::Dimension {
            context: "solve_linear right-hand side",
            expected: a.dim(),
            found: rhs.len(),
        });
    }
    let factors = LuFactors::new(a);
    let condition = factors.condition_estimate();
    if !condition.is_finite() || condition > policy.max_condition {
        return Err(Error::Singular { condition });
    }
    let x = factors.solve(rhs);
    if x.iter().any(|z| !z.is_finite()) {
        return Err(Error::Singular { condition: f64::INFINITY });
    }
    let ax = a.mul_vec(&x);
    let r: Vec<C64> = ax.iter().zip(rhs).map(|(p, q)| p - q).collect();
    let residual = norm2(&r);
    let scale = factors.norm1 * x.iter().map(|z| z.norm()).sum::<f64>() + norm2(rhs);
    if scale > 0.0 && residual > policy.residual * scale {
        return Err(Error::Singular { condition });
    }
    Ok(LinearSolution { x, condition, residual })
}

/// Solver for the family `(A + s I) x = b` over many shifts `s`.
///
/// `A` is reduced once to upper Hessenberg form `A = Q H Q^H`; each shift then
/// costs one O(n²) Hessenberg LU with partial pivoting instead of a fresh
/// O(n³) factorisation.
#[derive(Debug, Clone)]
pub struct ShiftedSolver {
    n: usize,
    q: Mat<C64>,
    /// Row-major copy of `H`.
    h_rows: Vec<C64>,
    scale: f64,
}

impl ShiftedSolver {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.dim();
        let mut h = a.as_faer().clone();
        let mut q = Mat::<C64>::identity(n, n);
        if n > 2 {
            let par = Par::Seq;
            let bs = faer::linalg::qr::no_pivoting::factor::recommended_block_size::<C64>(n - 1, n - 1);
            let req = StackReq::any_of(&[
                hessenberg::hessenberg_in_place_scratch::<C64>(n, bs, par, Default::default()),
                householder::apply_block_householder_sequence_on_the_right_in_place_scratch::<C64>(
                    n - 1,
                    bs,
                    n - 1,
                ),
            ]);
            let mut buf = MemBuffer::new(req);
            let stack = MemStack::new(&mut buf);
            let mut reflectors = Mat::<C64>::zeros(bs, n - 1);
            hessenberg::hessenberg_in_place(h.as_mut(), reflectors.as_mut(), par, stack, Default::default());
            householder::apply_block_householder_sequence_on_the_right_in_place_with_conj(
                h.as_ref().submatrix(1, 0, n - 1, n - 1),
                reflectors.as_ref(),
                Conj::No,
                q.as_mut().submatrix_mut(1, 1, n - 1, n - 1),
                par,
                stack,
            );
            for j in 0..n {
                for i in j + 2..n {
                    h[(i, j)] = ZERO;
                }
            }
        }
        let mut h_rows = vec![ZERO; n * n];
        let mut scale = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                h_rows[i * n + j] = h[(i, j)];
                scale = scale.max(h[(i, j)].norm());
            }
        }
        if h_rows.iter().any(|z| !z.is_finite()) {
            return Err(Error::Eigensolver("Hessenberg reduction produced non-finite entries".into()));
        }
        Ok(Self { n, q, h_rows, scale })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Q^H b`: maps a right-hand side into the Hessenberg frame.
    pub fn to_frame(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|k| self.q[(k, i)].conj() * b[k]).sum())
            .collect()
    }

    /// `Q^T l`: the left vector in the Hessenberg frame, so that
    /// `l^T x = (Q^T l)^T y` for `x = Q y`.
    pub fn left_to_frame(&self, l: &[C64]) -> Vec<C64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|k| self.q[(k, i)] * l[k]).sum())
            .collect()
    }

    /// `Q y`.
    pub fn from_frame(&self, y: &[C64]) -> Vec<C64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|k| self.q[(i, k)] * y[k]).sum())
            .collect()
    }

    /// Solves `(H + shift I) y = rhs` in the Hessenberg frame.
    ///
    /// The error carries the smallest pivot relative to `max|H|` when it
    /// drops below `1e-14`.
    pub fn solve_in_frame(&self, shift: C64, rhs: &[C64]) -> Result<Vec<C64>, f64> {
        let n = self.n;
        let mut m = self.h_rows.clone();
        for i in 0..n {
            m[i * n + i] += shift;
        }
        let mut y = rhs.to_vec();
        let floor = 1e-14 * self.scale.max(shift.norm()).max(f64::MIN_POSITIVE);
        for k in 0..n.saturating_sub(1) {
            let (upper, lower) = m.split_at_mut((k + 1) * n);
            let row_k = &mut upper[k * n..];
            let row_k1 = &mut lower[..n];
            if row_k1[k].norm() > row_k[k].norm() {
                row_k[k..].swap_with_slice(&mut row_k1[k..]);
                y.swap(k, k + 1);
            }
            let pivot = row_k[k];
            if pivot.norm() <= floor {
                return Err(pivot.norm() / self.scale.max(f64::MIN_POSITIVE));
            }
            let factor = row_k1[k] / pivot;
            if factor != ZERO {
                for j in k..n {
                    row_k1[j] -= factor * row_k[j];
                }
                y[k + 1] = y[k + 1] - factor * y[k];
            }
        }
        for i in (0..n).rev() {
            let row = &m[i * n..(i + 1) * n];
            let pivot = row[i];
            if pivot.norm() <= floor {
                return Err(pivot.norm() / self.scale.max(f64::MIN_POSITIVE));
            }
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= row[j] * y[j];
            }
            y[i] = acc / pivot;
        }
        Ok(y)
    }

    /// Solves `(A + shift I) x = b`.
    pub fn solve(&self, shift: C64, b: &[C64]) -> Result<Vec<C64>> {
        let y = self
            .solve_in_frame(shift, &self.to_frame(b))
            .map_err(|_| Error::Singular { condition: f64::INFINITY })?;
        Ok(self.from_frame(&y))
    }
}
