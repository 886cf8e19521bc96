//! Numerical tolerances shared by every module.

/// One record holding every tolerance the library checks against.
///
/// The defaults are the values the test-suite is written against; callers
/// that need looser or tighter checks construct their own policy and pass it
/// to the `*_with` variants of the checked operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    /// Relative Hermiticity tolerance: `max|A - A^H| <= hermiticity * max|A|`.
    pub hermiticity: f64,
    /// Absolute tolerance on `V^H V - I` for eigenvector columns.
    pub orthonormality: f64,
    /// Relative tolerance on `A - V diag(w) V^H`.
    pub reconstruction: f64,
    /// Linear solves with a larger condition estimate are rejected.
    pub max_condition: f64,
    /// Relative residual bound `|Ax - b| <= residual * |b|` for a well-conditioned solve.
    pub residual: f64,
    /// Transitions with `omega_k - omega_j` at or below this are discarded.
    pub degeneracy: f64,
    /// Allowed trace defect `|1^T L|` of a Liouvillian.
    pub trace_preservation: f64,
    /// Allowed positive real part of Liouvillian eigenvalues.
    pub stability: f64,
    /// Smallest admissible eigenvalue of a steady-state density matrix.
    pub positivity: f64,
    /// Required ratio between the second-smallest and smallest |eigenvalue|
    /// of a Liouvillian before its kernel is treated as one-dimensional.
    pub kernel_gap: f64,
    /// Tolerance of the double-sum versus collapsed dissipator self-check.
    pub dissipator_self_check: f64,
    /// Largest negative spectrum sample, relative to the maximum, accepted
    /// before clamping.
    pub negative_spectrum: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            hermiticity: 1e-9,
            orthonormality: 1e-10,
            reconstruction: 1e-9,
            max_condition: 1e13,
            residual: 1e-10,
            degeneracy: 1e-9,
            trace_preservation: 1e-10,
            stability: 1e-8,
            positivity: 1e-8,
            kernel_gap: 1e3,
            dissipator_self_check: 1e-12,
            negative_spectrum: 1e-8,
        }
    }
}
