//! Dense complex linear algebra and elementary operators on truncated
//! Hilbert spaces.

mod eigen;
mod ladder;
mod matrix;
mod solve;
mod space;

pub use eigen::{
    eigenvalues, hermitian_eig, hermitian_eig_with, hermitian_eigenvalues, hermitian_function, EigenSystem,
    MatrixFunction,
};
pub(crate) use eigen::check_hermitian;
pub use ladder::{annihilation, pauli_x, pauli_y, pauli_z, tls_lowering};
pub use matrix::ComplexMatrix;
pub use solve::{solve_linear, solve_linear_with, LinearSolution, LuFactors, ShiftedSolver};
pub use space::{HilbertSpace, MatterKind, Slot};

pub type C64 = num_complex::Complex64;
